#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "grulstm/dataio.hpp"
#include "grulstm/numerics.hpp"
#include "grulstm/rng.hpp"

namespace grulstm {

enum class Architecture { Gru, Lstm, GruLstm };

Architecture architecture_from_string(const std::string& s);
std::string to_string(Architecture a);

enum class Activation { Sigmoid, Linear };

// The candidate state of the GRU defaults to tanh; the sigmoid variant is
// kept as a switch for comparison runs.
enum class CandidateActivation { Tanh, Sigmoid };

struct GruParams {
    Matrix W_z, W_r, W_h;  // h x d
    Matrix U_z, U_r, U_h;  // h x h
    Vector b_z, b_r, b_h;  // h
    std::size_t input_dim() const { return W_z.cols; }
    std::size_t hidden() const { return W_z.rows; }
};

struct LstmParams {
    Matrix W_f, W_i, W_g, W_o;  // h x d
    Matrix U_f, U_i, U_g, U_o;  // h x h
    Vector b_f, b_i, b_g, b_o;  // h
    std::size_t input_dim() const { return W_f.cols; }
    std::size_t hidden() const { return W_f.rows; }
};

struct DenseParams {
    Matrix W;  // out x in
    Vector b;  // out
    Activation activation = Activation::Sigmoid;
};

struct GruLayer {
    GruParams p;
    CandidateActivation candidate = CandidateActivation::Tanh;
};
struct LstmLayer {
    LstmParams p;
};
struct DropoutLayer {
    double rate = 0.5;
};
struct DenseLayer {
    DenseParams p;
};
using Layer = std::variant<GruLayer, LstmLayer, DropoutLayer, DenseLayer>;

struct ModelOptions {
    // 0 means the canonical width for the architecture:
    // GRU(200) for gru, 100 for lstm and grulstm blocks.
    int recurrent_hidden = 0;
    int dense_hidden = 100;
    int output_dim = kNumClasses;
    double dropout = 0.5;
    CandidateActivation candidate_activation = CandidateActivation::Tanh;
    Activation hidden_dense_activation = Activation::Linear;
    Activation output_activation = Activation::Sigmoid;
};

// Named parameter tensor; vectors are exposed with cols == 0.
struct TensorRef {
    std::string name;
    std::vector<double>* data;
    std::size_t rows;
    std::size_t cols;
};

struct Model {
    Architecture architecture = Architecture::GruLstm;
    int input_dim = 1;
    ModelOptions options;
    std::vector<Layer> layers;
    std::uint64_t seed = 0;
    // Bumped on every parameter mutation; forward traces remember the
    // revision they were taken at so a stale backward is caught.
    std::uint64_t revision = 0;

    // Builds the canonical layer stack for the architecture:
    //   gru:     GRU(200) -> Dense(100) -> Dense(8, sigmoid)
    //   lstm:    LSTM(100) -> Dropout -> Dense(100) -> Dense(8, sigmoid)
    //   grulstm: GRU(100) -> LSTM(100) -> Dense(100) -> Dense(8, sigmoid)
    static Model make(Architecture arch, int input_dim, const ModelOptions& opts,
                      std::uint64_t seed);

    // Same shapes, all parameters zero. Used as a gradient accumulator.
    Model zeros_like() const;

    // All parameter tensors in a fixed, documented order.
    std::vector<TensorRef> tensors();
    std::vector<TensorRef> tensors() const;

    std::size_t parameter_count() const;
};

struct GruStepTrace {
    Vector x, h_prev, z, r, rh, c, h;
};
struct LstmStepTrace {
    Vector x, h_prev, c_prev, f, i, g, o, c, tc, h;
};
struct GruLayerTrace {
    std::vector<GruStepTrace> steps;
};
struct LstmLayerTrace {
    std::vector<LstmStepTrace> steps;
};
struct DropoutTrace {
    Vector in, mask;  // mask entries are 0 or 1/(1-rate); empty when inactive
    bool active = false;
};
struct DenseTrace {
    Vector in, out;
};
using LayerTrace = std::variant<GruLayerTrace, LstmLayerTrace, DropoutTrace, DenseTrace>;

struct ForwardTrace {
    std::vector<LayerTrace> layers;
    Vector scores;
    std::uint64_t model_revision = 0;
    std::size_t sequence_length = 0;
};

// One GRU step:
//   z = sigma(W_z x + U_z h_prev + b_z)
//   r = sigma(W_r x + U_r h_prev + b_r)
//   c = act(W_h x + U_h (r o h_prev) + b_h)
//   h = (1 - z) o h_prev + z o c
GruStepTrace gru_step(const GruParams& p, CandidateActivation candidate, const Vector& x,
                      const Vector& h_prev);

// One LSTM step:
//   f, i, o = sigma(W x + U h_prev + b);  g = tanh(W_g x + U_g h_prev + b_g)
//   c = f o c_prev + i o g;  h = o o tanh(c)
LstmStepTrace lstm_step(const LstmParams& p, const Vector& x, const Vector& h_prev,
                        const Vector& c_prev);

Vector dense_forward(const DenseParams& p, const Vector& input);

// Runs the full stack over a sequence. Recurrent layers consume every
// step; the final hidden state is the encoding fed to the dense head.
// Dropout masks are sampled only when training is true (inverted dropout).
ForwardTrace model_forward(const Model& m, const SequenceSample& s, bool training,
                           SeededRng* rng = nullptr);

// Reverse-mode pass. d_scores is dLoss/dScores; gradients are accumulated
// into `grads`, a zeros_like clone of the model. truncation < 0 means full
// backpropagation through time; otherwise the recurrent carry is cut after
// that many steps counted back from the end.
void model_backward(const Model& m, const ForwardTrace& trace, const Vector& d_scores,
                    Model& grads, int truncation = -1);

// Argmax over the score vector; ties break to the lowest index.
int predict_class(const Vector& scores);

}  // namespace grulstm
