#include "grulstm/recurrent.hpp"

#include <cmath>

#include "grulstm/error.hpp"

namespace grulstm {

Architecture architecture_from_string(const std::string& s) {
    if (s == "gru") return Architecture::Gru;
    if (s == "lstm") return Architecture::Lstm;
    if (s == "grulstm") return Architecture::GruLstm;
    throw Error(errc::kValidation, "unknown architecture '" + s + "' (expected gru|lstm|grulstm)");
}

std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::Gru: return "gru";
        case Architecture::Lstm: return "lstm";
        case Architecture::GruLstm: return "grulstm";
    }
    return "?";
}

namespace {

Vector zeros(std::size_t n) { return Vector(n, 0.0); }

GruParams make_gru_params(int input_dim, int hidden, SeededRng& rng) {
    GruParams p;
    const auto d = static_cast<std::size_t>(input_dim);
    const auto h = static_cast<std::size_t>(hidden);
    p.W_z = init_matrix(h, d, rng);
    p.W_r = init_matrix(h, d, rng);
    p.W_h = init_matrix(h, d, rng);
    p.U_z = init_matrix(h, h, rng);
    p.U_r = init_matrix(h, h, rng);
    p.U_h = init_matrix(h, h, rng);
    p.b_z = zeros(h);
    p.b_r = zeros(h);
    p.b_h = zeros(h);
    return p;
}

LstmParams make_lstm_params(int input_dim, int hidden, SeededRng& rng) {
    LstmParams p;
    const auto d = static_cast<std::size_t>(input_dim);
    const auto h = static_cast<std::size_t>(hidden);
    p.W_f = init_matrix(h, d, rng);
    p.W_i = init_matrix(h, d, rng);
    p.W_g = init_matrix(h, d, rng);
    p.W_o = init_matrix(h, d, rng);
    p.U_f = init_matrix(h, h, rng);
    p.U_i = init_matrix(h, h, rng);
    p.U_g = init_matrix(h, h, rng);
    p.U_o = init_matrix(h, h, rng);
    p.b_f = zeros(h);
    p.b_i = zeros(h);
    p.b_g = zeros(h);
    p.b_o = zeros(h);
    return p;
}

DenseParams make_dense_params(int in, int out, Activation act, SeededRng& rng) {
    DenseParams p;
    p.W = init_matrix(static_cast<std::size_t>(out), static_cast<std::size_t>(in), rng);
    p.b = zeros(static_cast<std::size_t>(out));
    p.activation = act;
    return p;
}

int canonical_hidden(Architecture arch, const ModelOptions& opts) {
    if (opts.recurrent_hidden > 0) return opts.recurrent_hidden;
    return arch == Architecture::Gru ? 200 : 100;
}

}  // namespace

Model Model::make(Architecture arch, int input_dim, const ModelOptions& opts, std::uint64_t seed) {
    if (input_dim < 1) throw Error(errc::kContract, "Model::make: input_dim must be >= 1");
    if (opts.dropout < 0.0 || opts.dropout >= 1.0) {
        throw Error(errc::kValidation, "Model::make: dropout must lie in [0,1)");
    }
    Model m;
    m.architecture = arch;
    m.input_dim = input_dim;
    m.options = opts;
    m.seed = seed;

    const int rh = canonical_hidden(arch, opts);
    SeededRng rng(derive_seed(seed, "model_init"));
    switch (arch) {
        case Architecture::Gru:
            m.layers.push_back(GruLayer{make_gru_params(input_dim, rh, rng), opts.candidate_activation});
            break;
        case Architecture::Lstm:
            m.layers.push_back(LstmLayer{make_lstm_params(input_dim, rh, rng)});
            m.layers.push_back(DropoutLayer{opts.dropout});
            break;
        case Architecture::GruLstm:
            m.layers.push_back(GruLayer{make_gru_params(input_dim, rh, rng), opts.candidate_activation});
            m.layers.push_back(LstmLayer{make_lstm_params(rh, rh, rng)});
            break;
    }
    m.layers.push_back(DenseLayer{make_dense_params(rh, opts.dense_hidden, opts.hidden_dense_activation, rng)});
    m.layers.push_back(
        DenseLayer{make_dense_params(opts.dense_hidden, opts.output_dim, opts.output_activation, rng)});
    return m;
}

Model Model::zeros_like() const {
    Model z = *this;
    z.revision = 0;
    for (auto& t : z.tensors()) {
        std::fill(t.data->begin(), t.data->end(), 0.0);
    }
    return z;
}

namespace {

void collect_tensors(std::vector<Layer>& layers, std::vector<TensorRef>& out) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string pre = "layer" + std::to_string(i) + ".";
        auto mat = [&](const char* n, Matrix& m) {
            out.push_back({pre + n, &m.data, m.rows, m.cols});
        };
        auto vec = [&](const char* n, Vector& v) { out.push_back({pre + n, &v, v.size(), 0}); };
        if (auto* g = std::get_if<GruLayer>(&layers[i])) {
            mat("W_z", g->p.W_z); mat("W_r", g->p.W_r); mat("W_h", g->p.W_h);
            mat("U_z", g->p.U_z); mat("U_r", g->p.U_r); mat("U_h", g->p.U_h);
            vec("b_z", g->p.b_z); vec("b_r", g->p.b_r); vec("b_h", g->p.b_h);
        } else if (auto* l = std::get_if<LstmLayer>(&layers[i])) {
            mat("W_f", l->p.W_f); mat("W_i", l->p.W_i); mat("W_g", l->p.W_g); mat("W_o", l->p.W_o);
            mat("U_f", l->p.U_f); mat("U_i", l->p.U_i); mat("U_g", l->p.U_g); mat("U_o", l->p.U_o);
            vec("b_f", l->p.b_f); vec("b_i", l->p.b_i); vec("b_g", l->p.b_g); vec("b_o", l->p.b_o);
        } else if (auto* d = std::get_if<DenseLayer>(&layers[i])) {
            mat("W", d->p.W);
            vec("b", d->p.b);
        }
    }
}

}  // namespace

std::vector<TensorRef> Model::tensors() {
    std::vector<TensorRef> out;
    collect_tensors(layers, out);
    return out;
}

std::vector<TensorRef> Model::tensors() const {
    // Callers treat the refs as read-only on const models.
    return const_cast<Model*>(this)->tensors();
}

std::size_t Model::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.data->size();
    return n;
}

GruStepTrace gru_step(const GruParams& p, CandidateActivation candidate, const Vector& x,
                      const Vector& h_prev) {
    if (x.size() != p.input_dim() || h_prev.size() != p.hidden()) {
        throw Error(errc::kDim, "gru_step: x length " + std::to_string(x.size()) + ", h_prev length " +
                                    std::to_string(h_prev.size()) + " vs cell d=" +
                                    std::to_string(p.input_dim()) + " h=" + std::to_string(p.hidden()));
    }
    GruStepTrace t;
    t.x = x;
    t.h_prev = h_prev;

    Vector az = add(add(matvec(p.W_z, x), matvec(p.U_z, h_prev)), p.b_z);
    t.z = sigmoid(az);
    Vector ar = add(add(matvec(p.W_r, x), matvec(p.U_r, h_prev)), p.b_r);
    t.r = sigmoid(ar);
    t.rh = hadamard(t.r, h_prev);
    Vector ac = add(add(matvec(p.W_h, x), matvec(p.U_h, t.rh)), p.b_h);
    t.c = candidate == CandidateActivation::Tanh ? tanh_act(ac) : sigmoid(ac);

    t.h.resize(p.hidden());
    for (std::size_t i = 0; i < t.h.size(); ++i) {
        t.h[i] = (1.0 - t.z[i]) * h_prev[i] + t.z[i] * t.c[i];
    }
    return t;
}

LstmStepTrace lstm_step(const LstmParams& p, const Vector& x, const Vector& h_prev,
                        const Vector& c_prev) {
    if (x.size() != p.input_dim() || h_prev.size() != p.hidden() || c_prev.size() != p.hidden()) {
        throw Error(errc::kDim, "lstm_step: x length " + std::to_string(x.size()) + ", h_prev length " +
                                    std::to_string(h_prev.size()) + ", c_prev length " +
                                    std::to_string(c_prev.size()) + " vs cell d=" +
                                    std::to_string(p.input_dim()) + " h=" + std::to_string(p.hidden()));
    }
    LstmStepTrace t;
    t.x = x;
    t.h_prev = h_prev;
    t.c_prev = c_prev;

    t.f = sigmoid(add(add(matvec(p.W_f, x), matvec(p.U_f, h_prev)), p.b_f));
    t.i = sigmoid(add(add(matvec(p.W_i, x), matvec(p.U_i, h_prev)), p.b_i));
    t.g = tanh_act(add(add(matvec(p.W_g, x), matvec(p.U_g, h_prev)), p.b_g));
    t.o = sigmoid(add(add(matvec(p.W_o, x), matvec(p.U_o, h_prev)), p.b_o));

    t.c.resize(p.hidden());
    for (std::size_t k = 0; k < t.c.size(); ++k) {
        t.c[k] = t.f[k] * c_prev[k] + t.i[k] * t.g[k];
    }
    t.tc = tanh_act(t.c);
    t.h = hadamard(t.o, t.tc);
    return t;
}

Vector dense_forward(const DenseParams& p, const Vector& input) {
    Vector a = add(matvec(p.W, input), p.b);
    if (p.activation == Activation::Sigmoid) return sigmoid(a);
    return a;
}

ForwardTrace model_forward(const Model& m, const SequenceSample& s, bool training, SeededRng* rng) {
    if (s.steps.empty()) throw Error(errc::kContract, "model_forward: empty sequence");
    for (const auto& step : s.steps) {
        if (step.size() != static_cast<std::size_t>(m.input_dim)) {
            throw Error(errc::kDim, "model_forward: step dimension " + std::to_string(step.size()) +
                                        " vs model input_dim " + std::to_string(m.input_dim));
        }
    }

    ForwardTrace trace;
    trace.model_revision = m.revision;
    trace.sequence_length = s.steps.size();

    std::vector<Vector> seq = s.steps;
    bool in_sequence_stage = true;
    Vector vec;

    for (const auto& layer : m.layers) {
        if (const auto* g = std::get_if<GruLayer>(&layer)) {
            if (!in_sequence_stage) throw Error(errc::kContract, "recurrent layer after dense stage");
            GruLayerTrace lt;
            Vector h(g->p.hidden(), 0.0);
            lt.steps.reserve(seq.size());
            for (const auto& x : seq) {
                lt.steps.push_back(gru_step(g->p, g->candidate, x, h));
                h = lt.steps.back().h;
            }
            for (std::size_t t = 0; t < seq.size(); ++t) seq[t] = lt.steps[t].h;
            trace.layers.emplace_back(std::move(lt));
        } else if (const auto* l = std::get_if<LstmLayer>(&layer)) {
            if (!in_sequence_stage) throw Error(errc::kContract, "recurrent layer after dense stage");
            LstmLayerTrace lt;
            Vector h(l->p.hidden(), 0.0);
            Vector c(l->p.hidden(), 0.0);
            lt.steps.reserve(seq.size());
            for (const auto& x : seq) {
                lt.steps.push_back(lstm_step(l->p, x, h, c));
                h = lt.steps.back().h;
                c = lt.steps.back().c;
            }
            for (std::size_t t = 0; t < seq.size(); ++t) seq[t] = lt.steps[t].h;
            trace.layers.emplace_back(std::move(lt));
        } else if (const auto* d = std::get_if<DropoutLayer>(&layer)) {
            if (in_sequence_stage) {
                // The encoding is the final hidden state of the last
                // recurrent layer; dropout applies to that vector.
                vec = seq.back();
                in_sequence_stage = false;
            }
            DropoutTrace dt;
            dt.in = vec;
            if (training && d->rate > 0.0) {
                if (rng == nullptr) {
                    throw Error(errc::kContract, "model_forward: training dropout needs an rng");
                }
                dt.active = true;
                dt.mask.resize(vec.size());
                const double keep_scale = 1.0 / (1.0 - d->rate);
                for (std::size_t i = 0; i < vec.size(); ++i) {
                    dt.mask[i] = rng->next_double() >= d->rate ? keep_scale : 0.0;
                }
                vec = hadamard(vec, dt.mask);
            }
            trace.layers.emplace_back(std::move(dt));
        } else if (const auto* dn = std::get_if<DenseLayer>(&layer)) {
            if (in_sequence_stage) {
                vec = seq.back();
                in_sequence_stage = false;
            }
            DenseTrace dt;
            dt.in = vec;
            vec = dense_forward(dn->p, vec);
            dt.out = vec;
            trace.layers.emplace_back(std::move(dt));
        }
    }
    if (in_sequence_stage) vec = seq.back();
    trace.scores = vec;
    return trace;
}

namespace {

// Backward through one recurrent layer over the whole sequence.
// d_seq holds dLoss/d(output h_t) per step on entry and dLoss/d(input x_t)
// per step on exit. truncation < 0 means no cut of the recurrent carry.
void gru_backward_seq(const GruLayer& layer, GruLayer& grads, const GruLayerTrace& lt,
                      std::vector<Vector>& d_seq, int truncation) {
    const auto h = layer.p.hidden();
    const auto steps = lt.steps.size();
    Vector carry(h, 0.0);  // dLoss/dh_{t} arriving from step t+1
    int propagated = 0;
    for (std::size_t ti = steps; ti-- > 0;) {
        const auto& t = lt.steps[ti];
        Vector dh = add(d_seq[ti], carry);

        Vector dz(h), dc(h), dh_prev(h);
        for (std::size_t k = 0; k < h; ++k) {
            dz[k] = dh[k] * (t.c[k] - t.h_prev[k]);
            dc[k] = dh[k] * t.z[k];
            dh_prev[k] = dh[k] * (1.0 - t.z[k]);
        }

        Vector dac(h);
        if (layer.candidate == CandidateActivation::Tanh) {
            for (std::size_t k = 0; k < h; ++k) dac[k] = dc[k] * (1.0 - t.c[k] * t.c[k]);
        } else {
            for (std::size_t k = 0; k < h; ++k) dac[k] = dc[k] * t.c[k] * (1.0 - t.c[k]);
        }
        add_outer(grads.p.W_h, dac, t.x);
        add_outer(grads.p.U_h, dac, t.rh);
        add_in_place(grads.p.b_h, dac);

        Vector drh = matvec_transposed(layer.p.U_h, dac);
        Vector dr(h);
        for (std::size_t k = 0; k < h; ++k) {
            dh_prev[k] += drh[k] * t.r[k];
            dr[k] = drh[k] * t.h_prev[k];
        }

        Vector dar(h), daz(h);
        for (std::size_t k = 0; k < h; ++k) {
            dar[k] = dr[k] * t.r[k] * (1.0 - t.r[k]);
            daz[k] = dz[k] * t.z[k] * (1.0 - t.z[k]);
        }
        add_outer(grads.p.W_r, dar, t.x);
        add_outer(grads.p.U_r, dar, t.h_prev);
        add_in_place(grads.p.b_r, dar);
        add_outer(grads.p.W_z, daz, t.x);
        add_outer(grads.p.U_z, daz, t.h_prev);
        add_in_place(grads.p.b_z, daz);

        add_in_place(dh_prev, matvec_transposed(layer.p.U_r, dar));
        add_in_place(dh_prev, matvec_transposed(layer.p.U_z, daz));

        Vector dx = matvec_transposed(layer.p.W_h, dac);
        add_in_place(dx, matvec_transposed(layer.p.W_r, dar));
        add_in_place(dx, matvec_transposed(layer.p.W_z, daz));
        d_seq[ti] = std::move(dx);

        ++propagated;
        if (truncation >= 0 && propagated >= truncation) {
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            propagated = 0;
        }
        carry = std::move(dh_prev);
    }
}

void lstm_backward_seq(const LstmLayer& layer, LstmLayer& grads, const LstmLayerTrace& lt,
                       std::vector<Vector>& d_seq, int truncation) {
    const auto h = layer.p.hidden();
    const auto steps = lt.steps.size();
    Vector carry_h(h, 0.0);
    Vector carry_c(h, 0.0);
    int propagated = 0;
    for (std::size_t ti = steps; ti-- > 0;) {
        const auto& t = lt.steps[ti];
        Vector dh = add(d_seq[ti], carry_h);

        Vector d_o(h), dc(h);
        for (std::size_t k = 0; k < h; ++k) {
            d_o[k] = dh[k] * t.tc[k];
            dc[k] = carry_c[k] + dh[k] * t.o[k] * (1.0 - t.tc[k] * t.tc[k]);
        }

        Vector df(h), di(h), dg(h), dc_prev(h);
        for (std::size_t k = 0; k < h; ++k) {
            df[k] = dc[k] * t.c_prev[k];
            di[k] = dc[k] * t.g[k];
            dg[k] = dc[k] * t.i[k];
            dc_prev[k] = dc[k] * t.f[k];
        }

        Vector daf(h), dai(h), dag(h), dao(h);
        for (std::size_t k = 0; k < h; ++k) {
            daf[k] = df[k] * t.f[k] * (1.0 - t.f[k]);
            dai[k] = di[k] * t.i[k] * (1.0 - t.i[k]);
            dag[k] = dg[k] * (1.0 - t.g[k] * t.g[k]);
            dao[k] = d_o[k] * t.o[k] * (1.0 - t.o[k]);
        }

        add_outer(grads.p.W_f, daf, t.x);
        add_outer(grads.p.W_i, dai, t.x);
        add_outer(grads.p.W_g, dag, t.x);
        add_outer(grads.p.W_o, dao, t.x);
        add_outer(grads.p.U_f, daf, t.h_prev);
        add_outer(grads.p.U_i, dai, t.h_prev);
        add_outer(grads.p.U_g, dag, t.h_prev);
        add_outer(grads.p.U_o, dao, t.h_prev);
        add_in_place(grads.p.b_f, daf);
        add_in_place(grads.p.b_i, dai);
        add_in_place(grads.p.b_g, dag);
        add_in_place(grads.p.b_o, dao);

        Vector dh_prev = matvec_transposed(layer.p.U_f, daf);
        add_in_place(dh_prev, matvec_transposed(layer.p.U_i, dai));
        add_in_place(dh_prev, matvec_transposed(layer.p.U_g, dag));
        add_in_place(dh_prev, matvec_transposed(layer.p.U_o, dao));

        Vector dx = matvec_transposed(layer.p.W_f, daf);
        add_in_place(dx, matvec_transposed(layer.p.W_i, dai));
        add_in_place(dx, matvec_transposed(layer.p.W_g, dag));
        add_in_place(dx, matvec_transposed(layer.p.W_o, dao));
        d_seq[ti] = std::move(dx);

        ++propagated;
        if (truncation >= 0 && propagated >= truncation) {
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            std::fill(dc_prev.begin(), dc_prev.end(), 0.0);
            propagated = 0;
        }
        carry_h = std::move(dh_prev);
        carry_c = std::move(dc_prev);
    }
}

}  // namespace

void model_backward(const Model& m, const ForwardTrace& trace, const Vector& d_scores, Model& grads,
                    int truncation) {
    if (trace.model_revision != m.revision) {
        throw Error(errc::kContract,
                    "model_backward: stale trace (model revision " + std::to_string(m.revision) +
                        ", trace revision " + std::to_string(trace.model_revision) + ")");
    }
    if (trace.layers.size() != m.layers.size() || grads.layers.size() != m.layers.size()) {
        throw Error(errc::kContract, "model_backward: trace/gradient layer count mismatch");
    }

    Vector dvec = d_scores;
    std::vector<Vector> d_seq;
    bool in_vector_stage = true;

    for (std::size_t i = m.layers.size(); i-- > 0;) {
        const auto& layer = m.layers[i];
        if (const auto* dn = std::get_if<DenseLayer>(&layer)) {
            const auto& dt = std::get<DenseTrace>(trace.layers[i]);
            const std::size_t out = dt.out.size();
            Vector da(out);
            if (dn->p.activation == Activation::Sigmoid) {
                for (std::size_t k = 0; k < out; ++k) da[k] = dvec[k] * dt.out[k] * (1.0 - dt.out[k]);
            } else {
                da = dvec;
            }
            auto& g = std::get<DenseLayer>(grads.layers[i]);
            add_outer(g.p.W, da, dt.in);
            add_in_place(g.p.b, da);
            dvec = matvec_transposed(dn->p.W, da);
        } else if (std::get_if<DropoutLayer>(&layer) != nullptr) {
            const auto& dt = std::get<DropoutTrace>(trace.layers[i]);
            if (dt.active) dvec = hadamard(dvec, dt.mask);
        } else {
            // Recurrent layer. Entering the sequence stage: only the final
            // step's output (the encoding) receives an upstream gradient.
            if (in_vector_stage) {
                d_seq.assign(trace.sequence_length, Vector());
                std::size_t hidden = std::get_if<GruLayer>(&layer) != nullptr
                                         ? std::get<GruLayer>(layer).p.hidden()
                                         : std::get<LstmLayer>(layer).p.hidden();
                for (auto& v : d_seq) v.assign(hidden, 0.0);
                d_seq.back() = dvec;
                in_vector_stage = false;
            }
            if (const auto* gl = std::get_if<GruLayer>(&layer)) {
                gru_backward_seq(*gl, std::get<GruLayer>(grads.layers[i]),
                                 std::get<GruLayerTrace>(trace.layers[i]), d_seq, truncation);
            } else {
                const auto& ll = std::get<LstmLayer>(layer);
                lstm_backward_seq(ll, std::get<LstmLayer>(grads.layers[i]),
                                  std::get<LstmLayerTrace>(trace.layers[i]), d_seq, truncation);
            }
        }
    }
}

int predict_class(const Vector& scores) {
    int best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace grulstm
