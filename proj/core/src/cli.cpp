#include "grulstm/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "grulstm/baselines.hpp"
#include "grulstm/error.hpp"
#include "grulstm/evaluation.hpp"
#include "grulstm/textio.hpp"

namespace grulstm {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kSubcommands = {"train",  "evaluate", "predict",  "baseline",
                                            "sweep",  "gradcheck", "subsample"};

const std::set<std::string> kValueFlags = {
    "--data",      "--model",  "--model-file", "--epochs",        "--batch-size", "--learning-rate",
    "--dropout",   "--seed",   "--mode",       "--window",        "--test-fraction", "--out",
    "--config",    "--sweep",  "--values",     "--n",             "--hidden",     "--criterion",
    "--rounds",    "--optimizer", "--truncation"};
const std::set<std::string> kBoolFlags = {"--stratified"};

std::string flag_key(const std::string& flag) {
    // "--batch-size" -> "batch-size"; config files use the same names.
    return flag.substr(2);
}

std::vector<double> parse_value_list(const std::string& s, const std::string& token) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v;
        if (!parse_double(item, v)) {
            throw Error(errc::kUsage, "bad value '" + item + "' in " + token);
        }
        out.push_back(v);
    }
    if (out.empty()) throw Error(errc::kUsage, "empty value list in " + token);
    return out;
}

bool is_neural(const std::string& model) {
    return model == "gru" || model == "lstm" || model == "grulstm";
}

bool is_baseline(const std::string& model) {
    return model == "tree" || model == "forest" || model == "gb" || model == "xgb";
}

}  // namespace

std::string usage_text() {
    return "usage: grulstm <train|evaluate|predict|baseline|sweep|gradcheck|subsample> [flags]\n"
           "  --data PATH            input CSV (x,y,z,intensity,r,g,b,class)\n"
           "  --model NAME           gru|lstm|grulstm|tree|forest|gb|xgb (default grulstm)\n"
           "  --model-file PATH      model file to load/save (default <out>/model.txt)\n"
           "  --epochs N             training epochs (default 10)\n"
           "  --batch-size N         mini-batch size (default 3000)\n"
           "  --learning-rate X      optimizer step size (default 0.001)\n"
           "  --dropout X            dropout rate in [0,1) (default 0.5)\n"
           "  --optimizer NAME       sgd|adam (default adam)\n"
           "  --seed N               root seed (default 42; env GRULSTM_SEED as fallback)\n"
           "  --mode NAME            point|window sequence mode (default point)\n"
           "  --window N             window length for window mode (default 10)\n"
           "  --truncation N         BPTT truncation; -1 = full (default -1)\n"
           "  --test-fraction X      held-out fraction in (0,1) (default 0.2)\n"
           "  --stratified           stratify the split / subsample\n"
           "  --hidden N             recurrent width override; 0 = canonical (default 0)\n"
           "  --criterion NAME       gini|entropy|misclassification (default gini)\n"
           "  --rounds N             boosting rounds; 0 = per-model default\n"
           "  --sweep NAME           batch|dropout\n"
           "  --values A,B,C         swept values (default: the standard lists)\n"
           "  --n N                  subsample size (default 50000)\n"
           "  --out DIR              output directory (default runs)\n"
           "  --config PATH          key=value config file (flag > file > default)\n";
}

RunConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty()) throw Error(errc::kUsage, "missing subcommand");
    RunConfig cfg;
    cfg.subcommand = args[0];
    if (kSubcommands.count(cfg.subcommand) == 0) {
        throw Error(errc::kUsage, "unknown subcommand '" + cfg.subcommand + "'");
    }

    std::map<std::string, std::string> flags;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& token = args[i];
        if (kBoolFlags.count(token) != 0) {
            flags[flag_key(token)] = "true";
            continue;
        }
        if (kValueFlags.count(token) == 0) {
            throw Error(errc::kUsage, "unknown flag '" + token + "'");
        }
        if (i + 1 >= args.size()) {
            throw Error(errc::kUsage, "flag '" + token + "' needs a value");
        }
        const std::string key = flag_key(token);
        if (flags.count(key) != 0) {
            throw Error(errc::kUsage, "flag '" + token + "' given twice");
        }
        flags[key] = args[++i];
    }

    std::map<std::string, std::string> file_values;
    if (auto it = flags.find("config"); it != flags.end()) {
        cfg.config_file = it->second;
        std::ifstream in(cfg.config_file);
        if (!in) throw Error(errc::kIo, "cannot open config file " + cfg.config_file);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw Error(errc::kUsage, cfg.config_file + ":" + std::to_string(line_no) +
                                              ": expected key=value, got '" + line + "'");
            }
            file_values[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }

    // flag > config file > default.
    auto resolve = [&](const std::string& key) -> const std::string* {
        if (auto it = flags.find(key); it != flags.end()) return &it->second;
        if (auto it = file_values.find(key); it != file_values.end()) return &it->second;
        return nullptr;
    };
    auto get_str = [&](const std::string& key, std::string& target) {
        if (const auto* v = resolve(key)) target = *v;
    };
    auto get_int = [&](const std::string& key, int& target) {
        if (const auto* v = resolve(key)) {
            long long x;
            if (!parse_long(*v, x)) throw Error(errc::kUsage, "--" + key + ": '" + *v + "' is not an integer");
            target = static_cast<int>(x);
        }
    };
    auto get_double = [&](const std::string& key, double& target) {
        if (const auto* v = resolve(key)) {
            double x;
            if (!parse_double(*v, x)) throw Error(errc::kUsage, "--" + key + ": '" + *v + "' is not a number");
            target = x;
        }
    };

    get_str("data", cfg.data_path);
    get_str("model", cfg.model);
    get_str("model-file", cfg.model_file);
    get_str("out", cfg.out_dir);
    get_int("epochs", cfg.train.epochs);
    get_int("batch-size", cfg.train.batch_size);
    get_double("learning-rate", cfg.train.learning_rate);
    get_double("dropout", cfg.train.dropout);
    get_double("test-fraction", cfg.test_fraction);
    get_int("hidden", cfg.hidden);
    get_int("window", cfg.train.window);
    get_int("truncation", cfg.train.truncation);
    get_int("rounds", cfg.rounds);
    get_str("criterion", cfg.criterion);
    get_str("sweep", cfg.sweep);

    if (const auto* v = resolve("stratified")) {
        if (*v == "true" || *v == "1") {
            cfg.stratified = true;
        } else if (*v == "false" || *v == "0") {
            cfg.stratified = false;
        } else {
            throw Error(errc::kUsage, "--stratified: '" + *v + "' is not a boolean");
        }
    }

    if (const auto* v = resolve("optimizer")) {
        try {
            cfg.train.optimizer = optimizer_from_string(*v);
        } catch (const Error&) {
            throw Error(errc::kUsage, "--optimizer: '" + *v + "' (expected sgd|adam)");
        }
    }
    if (const auto* v = resolve("mode")) {
        if (*v == "point") {
            cfg.train.mode = SequenceMode::Point;
        } else if (*v == "window") {
            cfg.train.mode = SequenceMode::Window;
        } else {
            throw Error(errc::kUsage, "--mode: '" + *v + "' (expected point|window)");
        }
    }
    if (const auto* v = resolve("values")) {
        cfg.values = parse_value_list(*v, "--values");
    }
    if (const auto* v = resolve("n")) {
        long long x;
        if (!parse_long(*v, x) || x < 1) throw Error(errc::kUsage, "--n: '" + *v + "' must be a positive integer");
        cfg.subsample_n = x;
    }

    // Seed precedence: flag > file > GRULSTM_SEED env > default.
    if (const auto* v = resolve("seed")) {
        long long x;
        if (!parse_long(*v, x)) throw Error(errc::kUsage, "--seed: '" + *v + "' is not an integer");
        cfg.train.seed = static_cast<std::uint64_t>(x);
    } else if (const char* env = std::getenv("GRULSTM_SEED")) {
        long long x;
        if (!parse_long(env, x)) throw Error(errc::kUsage, "GRULSTM_SEED: '" + std::string(env) + "' is not an integer");
        cfg.train.seed = static_cast<std::uint64_t>(x);
    }

    // Validation of resolved values; usage errors name the flag.
    if (!is_neural(cfg.model) && !is_baseline(cfg.model)) {
        throw Error(errc::kUsage, "--model: '" + cfg.model + "'");
    }
    if (cfg.train.epochs < 1) throw Error(errc::kUsage, "--epochs must be >= 1");
    if (cfg.train.batch_size < 1) throw Error(errc::kUsage, "--batch-size must be >= 1");
    if (!(cfg.train.learning_rate > 0.0)) throw Error(errc::kUsage, "--learning-rate must be > 0");
    if (cfg.train.dropout < 0.0 || cfg.train.dropout >= 1.0) {
        throw Error(errc::kUsage, "--dropout must lie in [0,1)");
    }
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw Error(errc::kUsage, "--test-fraction must lie in (0,1)");
    }
    if (cfg.hidden < 0) throw Error(errc::kUsage, "--hidden must be >= 0");
    if (cfg.rounds < 0) throw Error(errc::kUsage, "--rounds must be >= 0");
    if (!cfg.sweep.empty() && cfg.sweep != "batch" && cfg.sweep != "dropout") {
        throw Error(errc::kUsage, "--sweep: '" + cfg.sweep + "' (expected batch|dropout)");
    }
    try {
        criterion_from_string(cfg.criterion);
    } catch (const Error&) {
        throw Error(errc::kUsage, "--criterion: '" + cfg.criterion + "'");
    }

    if (cfg.model_file.empty()) cfg.model_file = cfg.out_dir + "/model.txt";
    return cfg;
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "subcommand=" << cfg.subcommand << '\n';
    out << "data=" << cfg.data_path << '\n';
    out << "model=" << cfg.model << '\n';
    out << "model-file=" << cfg.model_file << '\n';
    out << "out=" << cfg.out_dir << '\n';
    out << "epochs=" << cfg.train.epochs << '\n';
    out << "batch-size=" << cfg.train.batch_size << '\n';
    out << "learning-rate=" << format_double(cfg.train.learning_rate) << '\n';
    out << "dropout=" << format_double(cfg.train.dropout) << '\n';
    out << "optimizer=" << to_string(cfg.train.optimizer) << '\n';
    out << "seed=" << cfg.train.seed << '\n';
    out << "mode=" << (cfg.train.mode == SequenceMode::Point ? "point" : "window") << '\n';
    out << "window=" << cfg.train.window << '\n';
    out << "truncation=" << cfg.train.truncation << '\n';
    out << "test-fraction=" << format_double(cfg.test_fraction) << '\n';
    out << "stratified=" << (cfg.stratified ? "true" : "false") << '\n';
    out << "hidden=" << cfg.hidden << '\n';
    out << "criterion=" << cfg.criterion << '\n';
    out << "rounds=" << cfg.rounds << '\n';
    out << "sweep=" << cfg.sweep << '\n';
    out << "values=";
    for (std::size_t i = 0; i < cfg.values.size(); ++i) {
        out << (i ? "," : "") << format_double(cfg.values[i]);
    }
    out << '\n';
    out << "n=" << cfg.subsample_n << '\n';
    return out.str();
}

namespace {

void require_data(const RunConfig& cfg) {
    if (cfg.data_path.empty()) throw Error(errc::kUsage, "--data is required for " + cfg.subcommand);
}

void prepare_out_dir(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    std::ofstream echo(cfg.out_dir + "/config.txt");
    if (!echo) throw Error(errc::kIo, "cannot write " + cfg.out_dir + "/config.txt");
    echo << config_to_text(cfg);
}

struct PreparedData {
    NormalizationStats stats;
    std::vector<SequenceSample> train_seq;
    std::vector<SequenceSample> test_seq;
    Dataset train_raw;
    Dataset test_raw;
};

// Split, fit normalization on the training side only, apply to both,
// build sequences per mode.
PreparedData prepare(const RunConfig& cfg) {
    Dataset d = load_csv(cfg.data_path);
    if (d.size() == 0) throw Error(errc::kValidation, cfg.data_path + ": no data rows");
    SplitResult split = split_train_test(d, cfg.test_fraction, cfg.train.seed, cfg.stratified);
    PreparedData out;
    out.stats = fit_minmax(split.train);
    Dataset train_n = apply_minmax(split.train, out.stats);
    Dataset test_n = apply_minmax(split.test, out.stats);
    out.train_seq = make_sequences(train_n, cfg.train.mode, cfg.train.window);
    if (test_n.size() > 0) {
        out.test_seq = make_sequences(test_n, cfg.train.mode, cfg.train.window);
    }
    out.train_raw = std::move(train_n);
    out.test_raw = std::move(test_n);
    return out;
}

ModelOptions model_options(const RunConfig& cfg) {
    ModelOptions opts;
    opts.dropout = cfg.train.dropout;
    opts.recurrent_hidden = cfg.hidden;
    return opts;
}

int model_input_dim(const RunConfig& cfg) {
    return cfg.train.mode == SequenceMode::Point ? 1 : kNumFeatures;
}

MetricsReport evaluate_model(const Model& m, const std::vector<SequenceSample>& set) {
    std::vector<int> preds, labels;
    std::vector<Vector> scores;
    for (const auto& s : set) {
        auto t = model_forward(m, s, false);
        preds.push_back(predict_class(t.scores));
        labels.push_back(s.target);
        scores.push_back(std::move(t.scores));
    }
    MetricsReport r = compute_metrics(confusion(preds, labels));
    r.binary_output_accuracy = binary_output_accuracy(scores, labels);
    return r;
}

int run_train(const RunConfig& cfg) {
    require_data(cfg);
    if (!is_neural(cfg.model)) {
        throw Error(errc::kUsage, "--model must be gru|lstm|grulstm for 'train'");
    }
    prepare_out_dir(cfg);
    PreparedData data = prepare(cfg);
    Model m = Model::make(architecture_from_string(cfg.model), model_input_dim(cfg),
                          model_options(cfg), cfg.train.seed);
    EpochHistory history = train(m, data.train_seq, data.test_seq, cfg.train);
    save_model(m, data.stats, cfg.model_file);
    emit_history(history, cfg.out_dir + "/history.csv", EmitFormat::Csv);
    const auto& last = history.rows.back();
    std::cout << "final epoch: loss=" << format_double(last.loss)
              << " accuracy=" << format_double(last.accuracy)
              << " val_accuracy=" << format_double(last.val_accuracy) << '\n';
    std::cout << "model written to " << cfg.model_file << '\n';
    return 0;
}

int run_evaluate(const RunConfig& cfg) {
    require_data(cfg);
    prepare_out_dir(cfg);
    auto [m, stats] = load_model(cfg.model_file);
    Dataset d = load_csv(cfg.data_path);
    SplitResult split = split_train_test(d, cfg.test_fraction, cfg.train.seed, cfg.stratified);
    Dataset test_n = apply_minmax(split.test, stats);
    auto seq = make_sequences(test_n, cfg.train.mode, cfg.train.window);
    MetricsReport r = evaluate_model(m, seq);
    std::cout << metrics_to_text(r);
    write_metrics_report(r, cfg.out_dir + "/metrics.txt");
    return 0;
}

int run_predict(const RunConfig& cfg) {
    require_data(cfg);
    prepare_out_dir(cfg);
    auto [m, stats] = load_model(cfg.model_file);
    Dataset d = load_csv(cfg.data_path);
    Dataset n = apply_minmax(d, stats);
    auto seq = make_sequences(n, cfg.train.mode, cfg.train.window);
    const std::string path = cfg.out_dir + "/predictions.csv";
    std::ofstream out(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);
    out << "predicted_class";
    for (int k = 0; k < kNumClasses; ++k) out << ",score" << k;
    out << '\n';
    for (const auto& s : seq) {
        auto t = model_forward(m, s, false);
        out << predict_class(t.scores);
        for (double v : t.scores) out << ',' << format_double(v);
        out << '\n';
    }
    std::cout << "predictions written to " << path << '\n';
    return 0;
}

int run_baseline(const RunConfig& cfg) {
    require_data(cfg);
    if (!is_baseline(cfg.model)) {
        throw Error(errc::kUsage, "--model must be tree|forest|gb|xgb for 'baseline'");
    }
    prepare_out_dir(cfg);
    PreparedData data = prepare(cfg);
    auto train_rows = to_rows(data.train_raw);
    auto test_rows = to_rows(data.test_raw);

    std::vector<int> preds, labels;
    labels.reserve(test_rows.size());
    for (const auto& r : test_rows) labels.push_back(r.label);
    const std::string learner_path = cfg.out_dir + "/baseline.txt";

    if (cfg.model == "tree") {
        TreeConfig tc;
        tc.criterion = criterion_from_string(cfg.criterion);
        auto tree = fit_tree(train_rows, tc);
        for (const auto& r : test_rows) preds.push_back(predict_tree(*tree, r.features));
        save_tree(*tree, learner_path);
    } else if (cfg.model == "forest") {
        ForestConfig fc;
        fc.criterion = criterion_from_string(cfg.criterion);
        Forest forest = fit_forest(train_rows, fc, cfg.train.seed);
        for (const auto& r : test_rows) preds.push_back(predict_forest(forest, r.features));
        save_forest(forest, learner_path);
    } else if (cfg.model == "gb") {
        GradientBoostConfig gc;
        if (cfg.rounds > 0) gc.n_rounds = cfg.rounds;
        Booster b = fit_gradient_boost(train_rows, gc);
        for (const auto& r : test_rows) preds.push_back(predict_booster(b, r.features));
        save_booster(b, learner_path);
    } else {
        XgbConfig xc;
        if (cfg.rounds > 0) xc.n_rounds = cfg.rounds;
        Booster b = fit_xgb(train_rows, xc, cfg.train.seed);
        for (const auto& r : test_rows) preds.push_back(predict_booster(b, r.features));
        save_booster(b, learner_path);
    }

    MetricsReport r = compute_metrics(confusion(preds, labels));
    std::cout << metrics_to_text(r);
    write_metrics_report(r, cfg.out_dir + "/metrics.txt");
    std::cout << "fitted learner written to " << learner_path << '\n';
    return 0;
}

int run_sweep_cmd(const RunConfig& cfg) {
    require_data(cfg);
    if (cfg.sweep.empty()) throw Error(errc::kUsage, "--sweep batch|dropout is required for 'sweep'");
    if (!is_neural(cfg.model)) {
        throw Error(errc::kUsage, "--model must be gru|lstm|grulstm for 'sweep'");
    }
    prepare_out_dir(cfg);
    const SweepParam param = cfg.sweep == "batch" ? SweepParam::BatchSize : SweepParam::Dropout;
    std::vector<double> values = cfg.values;
    if (values.empty()) {
        values = param == SweepParam::BatchSize ? default_batch_sizes() : default_dropouts();
    }
    PreparedData data = prepare(cfg);
    SweepResult result = run_sweep(param, values, cfg.train, architecture_from_string(cfg.model),
                                   model_options(cfg), data.train_seq, data.test_seq);
    emit_sweep(result, cfg.out_dir + "/sweep.csv", EmitFormat::Csv);
    emit_sweep(result, cfg.out_dir + "/sweep.txt", EmitFormat::Text);
    std::cout << "sweep results written to " << cfg.out_dir << "/sweep.csv\n";
    return 0;
}

int run_gradcheck(const RunConfig& cfg) {
    const std::string arch = is_neural(cfg.model) ? cfg.model : "grulstm";
    ModelOptions opts;
    opts.recurrent_hidden = cfg.hidden > 0 ? cfg.hidden : 5;
    opts.dense_hidden = 8;
    opts.dropout = cfg.train.dropout;
    Model m = Model::make(architecture_from_string(arch), 1, opts, cfg.train.seed);

    SeededRng rng(derive_seed(cfg.train.seed, "gradcheck_sample"));
    SequenceSample sample;
    for (int t = 0; t < kNumFeatures; ++t) sample.steps.push_back(Vector{rng.next_double()});
    sample.target = static_cast<int>(rng.below(kNumClasses));

    GradCheckReport report = gradient_check(m, sample);
    std::cout << "gradcheck " << arch << ": max_rel_error=" << format_double(report.max_rel_error)
              << " worst=" << report.worst_parameter << "[" << report.worst_index << "] "
              << (report.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? 0 : 1;
}

// Two-pass streaming subsample: count class rows, allocate quotas, then
// draw each row with sequential sampling so memory stays O(1) per class.
int run_subsample(const RunConfig& cfg) {
    require_data(cfg);
    prepare_out_dir(cfg);

    std::ifstream count_in(cfg.data_path);
    if (!count_in) throw Error(errc::kIo, "cannot open " + cfg.data_path);
    std::string header;
    if (!std::getline(count_in, header)) throw Error(errc::kSchema, cfg.data_path + ": empty file");

    std::array<long long, kNumClasses> class_counts{};
    long long total = 0;
    std::string line;
    while (std::getline(count_in, line)) {
        if (line.empty()) continue;
        const auto pos = line.find_last_of(',');
        long long lbl;
        if (pos == std::string::npos || !parse_long(line.substr(pos + 1), lbl) || lbl < 0 ||
            lbl >= kNumClasses) {
            throw Error(errc::kParse, cfg.data_path + ": bad class field in row " +
                                          std::to_string(total + 2));
        }
        class_counts[lbl] += 1;
        total += 1;
    }
    if (cfg.subsample_n > total) {
        throw Error(errc::kValidation, "--n " + std::to_string(cfg.subsample_n) + " exceeds " +
                                           std::to_string(total) + " available rows");
    }

    std::array<long long, kNumClasses> quota{};
    if (cfg.stratified) {
        long long assigned = 0;
        for (int c = 0; c < kNumClasses; ++c) {
            quota[c] = std::min<long long>(
                class_counts[c],
                std::llround(static_cast<double>(cfg.subsample_n) * static_cast<double>(class_counts[c]) /
                             static_cast<double>(total)));
            assigned += quota[c];
        }
        // Fix rounding drift against the class with the most headroom.
        while (assigned != cfg.subsample_n) {
            const long long dir = assigned < cfg.subsample_n ? 1 : -1;
            int best = -1;
            for (int c = 0; c < kNumClasses; ++c) {
                const bool can = dir > 0 ? quota[c] < class_counts[c] : quota[c] > 0;
                if (can && (best < 0 || class_counts[c] > class_counts[best])) best = c;
            }
            quota[best] += dir;
            assigned += dir;
        }
    } else {
        quota[0] = cfg.subsample_n;  // treated as a single pool below
    }

    SeededRng rng(derive_seed(cfg.train.seed, "subsample"));
    std::ifstream in(cfg.data_path);
    std::getline(in, line);  // header
    const std::string out_path = cfg.out_dir + "/subsample.csv";
    std::ofstream out(out_path);
    if (!out) throw Error(errc::kIo, "cannot write " + out_path);
    out << header << '\n';

    std::array<long long, kNumClasses> remaining_rows = class_counts;
    std::array<long long, kNumClasses> remaining_quota = quota;
    long long pool_rows = total, pool_quota = cfg.subsample_n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        bool take;
        if (cfg.stratified) {
            const auto pos = line.find_last_of(',');
            long long lbl;
            parse_long(line.substr(pos + 1), lbl);
            const int c = static_cast<int>(lbl);
            take = rng.next_double() * static_cast<double>(remaining_rows[c]) <
                   static_cast<double>(remaining_quota[c]);
            remaining_rows[c] -= 1;
            if (take) remaining_quota[c] -= 1;
        } else {
            take = rng.next_double() * static_cast<double>(pool_rows) < static_cast<double>(pool_quota);
            pool_rows -= 1;
            if (take) pool_quota -= 1;
        }
        if (take) out << line << '\n';
    }
    if (!out) throw Error(errc::kIo, "write failure on " + out_path);
    std::cout << "subsample of " << cfg.subsample_n << " rows written to " << out_path << '\n';
    return 0;
}

}  // namespace

int dispatch(const RunConfig& cfg) {
    if (cfg.subcommand == "train") return run_train(cfg);
    if (cfg.subcommand == "evaluate") return run_evaluate(cfg);
    if (cfg.subcommand == "predict") return run_predict(cfg);
    if (cfg.subcommand == "baseline") return run_baseline(cfg);
    if (cfg.subcommand == "sweep") return run_sweep_cmd(cfg);
    if (cfg.subcommand == "gradcheck") return run_gradcheck(cfg);
    if (cfg.subcommand == "subsample") return run_subsample(cfg);
    throw Error(errc::kUsage, "unknown subcommand '" + cfg.subcommand + "'");
}

}  // namespace grulstm
