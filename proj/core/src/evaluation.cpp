#include "grulstm/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "grulstm/error.hpp"
#include "grulstm/textio.hpp"

namespace grulstm {

ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size()) {
        throw Error(errc::kDim, "confusion: " + std::to_string(preds.size()) + " predictions vs " +
                                    std::to_string(labels.size()) + " labels");
    }
    ConfusionMatrix c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i], l = labels[i];
        if (p < 0 || p >= kNumClasses || l < 0 || l >= kNumClasses) {
            throw Error(errc::kValidation, "confusion: class outside 0-" +
                                               std::to_string(kNumClasses - 1) + " at index " +
                                               std::to_string(i));
        }
        c.counts[l][p] += 1;
        c.total += 1;
    }
    return c;
}

MetricsReport compute_metrics(const ConfusionMatrix& c) {
    if (c.total <= 0) throw Error(errc::kContract, "compute_metrics: empty confusion matrix");

    MetricsReport r;
    long trace = 0;
    std::array<long, kNumClasses> row_sums{}, col_sums{};
    for (int i = 0; i < kNumClasses; ++i) {
        trace += c.counts[i][i];
        for (int j = 0; j < kNumClasses; ++j) {
            row_sums[i] += c.counts[i][j];
            col_sums[j] += c.counts[i][j];
        }
    }
    r.accuracy = static_cast<double>(trace) / static_cast<double>(c.total);

    int present = 0;
    for (int i = 0; i < kNumClasses; ++i) {
        const long tp = c.counts[i][i];
        const long fp = col_sums[i] - tp;
        const long fn = row_sums[i] - tp;
        r.precision[i] = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        r.recall[i] = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        r.f1[i] = (r.precision[i] + r.recall[i]) == 0.0
                      ? 0.0
                      : 2.0 * r.precision[i] * r.recall[i] / (r.precision[i] + r.recall[i]);
        if (row_sums[i] > 0) {
            ++present;
            r.precision_macro += r.precision[i];
            r.recall_macro += r.recall[i];
            r.f1_macro += r.f1[i];
            const double w = static_cast<double>(row_sums[i]) / static_cast<double>(c.total);
            r.precision_weighted += w * r.precision[i];
            r.recall_weighted += w * r.recall[i];
            r.f1_weighted += w * r.f1[i];
        }
    }
    if (present > 0) {
        r.precision_macro /= present;
        r.recall_macro /= present;
        r.f1_macro /= present;
    }
    return r;
}

double binary_output_accuracy(const std::vector<Vector>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw Error(errc::kDim, "binary_output_accuracy: size mismatch or empty input");
    }
    long agree = 0, total = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t k = 0; k < scores[i].size(); ++k) {
            const bool predicted = scores[i][k] >= 0.5;
            const bool actual = static_cast<std::size_t>(labels[i]) == k;
            agree += predicted == actual ? 1 : 0;
            total += 1;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

std::vector<double> default_batch_sizes() {
    return {8, 16, 32, 64, 128, 296, 512, 1024};
}

std::vector<double> default_dropouts() {
    return {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

SweepResult run_sweep(SweepParam param, const std::vector<double>& values, const TrainConfig& base,
                      Architecture arch, const ModelOptions& opts,
                      const std::vector<SequenceSample>& train_set,
                      const std::vector<SequenceSample>& val_set) {
    if (values.empty()) throw Error(errc::kValidation, "run_sweep: empty value list");
    for (double v : values) {
        if (param == SweepParam::BatchSize) {
            if (v < 1.0 || v != std::floor(v)) {
                throw Error(errc::kValidation, "run_sweep: invalid batch size " + format_double(v));
            }
        } else if (v < 0.0 || v >= 1.0) {
            throw Error(errc::kValidation, "run_sweep: invalid dropout " + format_double(v));
        }
    }

    SweepResult result;
    result.parameter = param == SweepParam::BatchSize ? "batch_size" : "dropout";
    for (double v : values) {
        TrainConfig cfg = base;
        ModelOptions mo = opts;
        if (param == SweepParam::BatchSize) {
            cfg.batch_size = static_cast<int>(v);
        } else {
            cfg.dropout = v;
            mo.dropout = v;
        }
        Model m = Model::make(arch, train_set.front().steps.front().size(), mo, cfg.seed);
        EpochHistory h = train(m, train_set, val_set, cfg);

        SweepEntry e;
        e.value = v;
        e.final_loss = h.rows.back().val_loss;
        // Recompute validation metrics on the trained model so the entry
        // carries the full report, not just the history columns.
        std::vector<int> preds, labels;
        std::vector<Vector> scores;
        for (const auto& s : val_set) {
            auto t = model_forward(m, s, false);
            preds.push_back(predict_class(t.scores));
            labels.push_back(s.target);
            scores.push_back(std::move(t.scores));
        }
        if (!preds.empty()) {
            e.metrics = compute_metrics(confusion(preds, labels));
            e.metrics.binary_output_accuracy = binary_output_accuracy(scores, labels);
        }
        result.entries.push_back(std::move(e));
    }
    return result;
}

namespace {

void open_or_throw(std::ofstream& out, const std::string& path) {
    out.open(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);
}

}  // namespace

void emit_history(const EpochHistory& h, const std::string& path, EmitFormat format) {
    if (h.rows.empty()) throw Error(errc::kContract, "emit_history: empty history");
    std::ofstream out;
    open_or_throw(out, path);
    if (format == EmitFormat::Csv) {
        out << "epoch,loss,accuracy,precision_macro,recall_macro,f1_macro,"
               "val_loss,val_accuracy,val_precision_macro,val_recall_macro,val_f1_macro\n";
        for (std::size_t i = 0; i < h.rows.size(); ++i) {
            const auto& r = h.rows[i];
            out << (i + 1) << ',' << format_double(r.loss) << ',' << format_double(r.accuracy) << ','
                << format_double(r.precision) << ',' << format_double(r.recall) << ','
                << format_double(r.f1) << ',' << format_double(r.val_loss) << ','
                << format_double(r.val_accuracy) << ',' << format_double(r.val_precision) << ','
                << format_double(r.val_recall) << ',' << format_double(r.val_f1) << '\n';
        }
    } else {
        for (std::size_t i = 0; i < h.rows.size(); ++i) {
            const auto& r = h.rows[i];
            out << "epoch " << (i + 1) << '\n'
                << "  loss " << format_double(r.loss) << '\n'
                << "  accuracy " << format_double(r.accuracy) << '\n'
                << "  precision_macro " << format_double(r.precision) << '\n'
                << "  recall_macro " << format_double(r.recall) << '\n'
                << "  f1_macro " << format_double(r.f1) << '\n'
                << "  val_loss " << format_double(r.val_loss) << '\n'
                << "  val_accuracy " << format_double(r.val_accuracy) << '\n'
                << "  val_precision_macro " << format_double(r.val_precision) << '\n'
                << "  val_recall_macro " << format_double(r.val_recall) << '\n'
                << "  val_f1_macro " << format_double(r.val_f1) << '\n';
        }
    }
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

void emit_sweep(const SweepResult& s, const std::string& path, EmitFormat format) {
    if (s.entries.empty()) throw Error(errc::kContract, "emit_sweep: empty sweep result");
    std::ofstream out;
    open_or_throw(out, path);
    if (format == EmitFormat::Csv) {
        out << "value,final_loss,val_accuracy,val_precision_macro,val_recall_macro,val_f1_macro\n";
        for (const auto& e : s.entries) {
            out << format_double(e.value) << ',' << format_double(e.final_loss) << ','
                << format_double(e.metrics.accuracy) << ',' << format_double(e.metrics.precision_macro)
                << ',' << format_double(e.metrics.recall_macro) << ','
                << format_double(e.metrics.f1_macro) << '\n';
        }
    } else {
        out << "parameter " << s.parameter << '\n';
        for (const auto& e : s.entries) {
            out << "value " << format_double(e.value) << '\n'
                << "  final_loss " << format_double(e.final_loss) << '\n'
                << "  val_accuracy " << format_double(e.metrics.accuracy) << '\n'
                << "  val_precision_macro " << format_double(e.metrics.precision_macro) << '\n'
                << "  val_recall_macro " << format_double(e.metrics.recall_macro) << '\n'
                << "  val_f1_macro " << format_double(e.metrics.f1_macro) << '\n';
        }
    }
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

std::string metrics_to_text(const MetricsReport& r) {
    std::ostringstream out;
    out << "accuracy " << format_double(r.accuracy) << '\n';
    out << "precision_macro " << format_double(r.precision_macro) << '\n';
    out << "recall_macro " << format_double(r.recall_macro) << '\n';
    out << "f1_macro " << format_double(r.f1_macro) << '\n';
    out << "precision_weighted " << format_double(r.precision_weighted) << '\n';
    out << "recall_weighted " << format_double(r.recall_weighted) << '\n';
    out << "f1_weighted " << format_double(r.f1_weighted) << '\n';
    if (r.binary_output_accuracy) {
        out << "binary_output_accuracy " << format_double(*r.binary_output_accuracy) << '\n';
    }
    for (int c = 0; c < kNumClasses; ++c) {
        out << "class" << c << " precision " << format_double(r.precision[c]) << " recall "
            << format_double(r.recall[c]) << " f1 " << format_double(r.f1[c]) << '\n';
    }
    return out.str();
}

void write_metrics_report(const MetricsReport& r, const std::string& path) {
    std::ofstream out;
    open_or_throw(out, path);
    out << metrics_to_text(r);
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

}  // namespace grulstm
