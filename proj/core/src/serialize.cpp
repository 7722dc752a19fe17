#include <fstream>
#include <map>
#include <sstream>

#include "grulstm/error.hpp"
#include "grulstm/textio.hpp"
#include "grulstm/training.hpp"

namespace grulstm {

namespace {

constexpr const char* kMagic = "grulstm-model";
constexpr int kFormatVersion = 1;

std::string activation_name(Activation a) {
    return a == Activation::Sigmoid ? "sigmoid" : "linear";
}

Activation activation_from(const std::string& s) {
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "linear") return Activation::Linear;
    throw Error(errc::kFormat, "unknown activation '" + s + "'");
}

}  // namespace

void save_model(const Model& m, const NormalizationStats& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);

    out << kMagic << '\n';
    out << "format_version " << kFormatVersion << '\n';
    out << "architecture " << to_string(m.architecture) << '\n';
    out << "input_dim " << m.input_dim << '\n';
    out << "recurrent_hidden " << m.options.recurrent_hidden << '\n';
    out << "dense_hidden " << m.options.dense_hidden << '\n';
    out << "output_dim " << m.options.output_dim << '\n';
    out << "dropout " << format_double(m.options.dropout) << '\n';
    out << "candidate_activation "
        << (m.options.candidate_activation == CandidateActivation::Tanh ? "tanh" : "sigmoid") << '\n';
    out << "hidden_dense_activation " << activation_name(m.options.hidden_dense_activation) << '\n';
    out << "output_activation " << activation_name(m.options.output_activation) << '\n';
    out << "seed " << m.seed << '\n';
    out << "norm_min";
    for (double v : stats.min) out << ' ' << format_double(v);
    out << '\n';
    out << "norm_max";
    for (double v : stats.max) out << ' ' << format_double(v);
    out << '\n';

    for (const auto& t : m.tensors()) {
        out << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
        const std::size_t cols = t.cols == 0 ? t.data->size() : t.cols;
        for (std::size_t i = 0; i < t.data->size(); ++i) {
            out << format_double((*t.data)[i]);
            out << (((i + 1) % cols == 0) ? '\n' : ' ');
        }
    }
    out << "end\n";
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

std::pair<Model, NormalizationStats> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::kIo, "cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw Error(errc::kFormat, path + ": not a model file (bad magic)");
    }

    std::map<std::string, std::string> fields;
    std::streampos tensor_start{};
    while (true) {
        tensor_start = in.tellg();
        if (!std::getline(in, line)) throw Error(errc::kFormat, path + ": truncated header");
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "tensor") break;
        std::string rest;
        std::getline(ls, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        fields[key] = rest;
    }

    auto need = [&](const std::string& key) {
        auto it = fields.find(key);
        if (it == fields.end()) throw Error(errc::kFormat, path + ": missing field '" + key + "'");
        return it->second;
    };

    long long version;
    if (!parse_long(need("format_version"), version) || version != kFormatVersion) {
        throw Error(errc::kFormat, path + ": unsupported format_version '" + need("format_version") +
                                       "' (expected " + std::to_string(kFormatVersion) + ")");
    }

    ModelOptions opts;
    long long tmp;
    if (!parse_long(need("recurrent_hidden"), tmp)) throw Error(errc::kFormat, "bad recurrent_hidden");
    opts.recurrent_hidden = static_cast<int>(tmp);
    if (!parse_long(need("dense_hidden"), tmp)) throw Error(errc::kFormat, "bad dense_hidden");
    opts.dense_hidden = static_cast<int>(tmp);
    if (!parse_long(need("output_dim"), tmp)) throw Error(errc::kFormat, "bad output_dim");
    opts.output_dim = static_cast<int>(tmp);
    if (!parse_double(need("dropout"), opts.dropout)) throw Error(errc::kFormat, "bad dropout");
    opts.candidate_activation = need("candidate_activation") == "tanh" ? CandidateActivation::Tanh
                                                                       : CandidateActivation::Sigmoid;
    opts.hidden_dense_activation = activation_from(need("hidden_dense_activation"));
    opts.output_activation = activation_from(need("output_activation"));

    if (!parse_long(need("input_dim"), tmp)) throw Error(errc::kFormat, "bad input_dim");
    const int input_dim = static_cast<int>(tmp);
    if (!parse_long(need("seed"), tmp)) throw Error(errc::kFormat, "bad seed");
    const auto seed = static_cast<std::uint64_t>(tmp);

    NormalizationStats stats;
    {
        std::istringstream mins(need("norm_min")), maxs(need("norm_max"));
        for (int j = 0; j < kNumFeatures; ++j) {
            if (!(mins >> stats.min[j]) || !(maxs >> stats.max[j])) {
                throw Error(errc::kFormat, path + ": normalization stats need 7 min/max pairs");
            }
        }
    }

    Model m = Model::make(architecture_from_string(need("architecture")), input_dim, opts, seed);

    auto refs = m.tensors();
    std::size_t filled = 0;
    in.clear();
    in.seekg(tensor_start);
    while (std::getline(in, line)) {
        if (line == "end") break;
        std::istringstream ls(line);
        std::string tag, name;
        std::size_t rows, cols;
        if (!(ls >> tag >> name >> rows >> cols) || tag != "tensor") {
            throw Error(errc::kFormat, path + ": malformed tensor header '" + line + "'");
        }
        TensorRef* ref = nullptr;
        for (auto& r : refs) {
            if (r.name == name) {
                ref = &r;
                break;
            }
        }
        if (ref == nullptr) throw Error(errc::kFormat, path + ": unknown tensor '" + name + "'");
        if (ref->rows != rows || ref->cols != cols) {
            throw Error(errc::kFormat, path + ": shape inconsistency for '" + name + "': file says " +
                                           std::to_string(rows) + "x" + std::to_string(cols) +
                                           ", model needs " + std::to_string(ref->rows) + "x" +
                                           std::to_string(ref->cols));
        }
        for (auto& v : *ref->data) {
            if (!(in >> v)) throw Error(errc::kFormat, path + ": truncated values for '" + name + "'");
        }
        std::getline(in, line);  // consume the rest of the last value line
        ++filled;
    }
    if (filled != refs.size()) {
        throw Error(errc::kFormat, path + ": expected " + std::to_string(refs.size()) +
                                       " tensors, found " + std::to_string(filled));
    }
    return {std::move(m), stats};
}

}  // namespace grulstm
