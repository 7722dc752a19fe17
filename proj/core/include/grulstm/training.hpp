#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grulstm/dataio.hpp"
#include "grulstm/recurrent.hpp"

namespace grulstm {

enum class Optimizer { Sgd, Adam };
enum class LossKind { SigmoidBce, SoftmaxCe };

Optimizer optimizer_from_string(const std::string& s);
std::string to_string(Optimizer o);

struct TrainConfig {
    int epochs = 10;
    int batch_size = 3000;
    double learning_rate = 0.001;
    double dropout = 0.5;
    Optimizer optimizer = Optimizer::Adam;
    LossKind loss = LossKind::SigmoidBce;
    std::uint64_t seed = 42;
    SequenceMode mode = SequenceMode::Point;
    int window = 10;
    int truncation = -1;  // <0: full backpropagation through time

    void validate() const;
};

struct EpochRow {
    double loss = 0, accuracy = 0, precision = 0, recall = 0, f1 = 0;
    double val_loss = 0, val_accuracy = 0, val_precision = 0, val_recall = 0, val_f1 = 0;
};

struct EpochHistory {
    std::vector<EpochRow> rows;
};

// Adam keeps first/second moment tensors mirroring the parameter shapes;
// plain SGD keeps nothing.
struct OptimizerState {
    Optimizer kind = Optimizer::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    std::vector<std::vector<double>> m;  // first moments, one per tensor
    std::vector<std::vector<double>> v;  // second moments

    static OptimizerState for_model(const Model& model, Optimizer kind);
};

// Summed binary cross-entropy of 8 sigmoid scores against a one-hot
// target; scores are clipped to [1e-12, 1-1e-12] before the logs.
// Returns (loss, dLoss/dScores).
std::pair<double, Vector> bce_loss(const Vector& scores, const Vector& target);

// Softmax cross-entropy alternative (expects raw/linear scores).
std::pair<double, Vector> softmax_ce_loss(const Vector& scores, const Vector& target);

// One parameter update; throws E_NUMERIC if any gradient is non-finite.
void optimizer_step(OptimizerState& state, Model& params, const Model& grads,
                    const TrainConfig& cfg);

// Mini-batch loop: seeded shuffle per epoch, mean gradient per batch, one
// optimizer step per batch (last short batch kept), then train/validation
// metrics recorded per epoch. Deterministic given (seed, config, data).
EpochHistory train(Model& m, const std::vector<SequenceSample>& train_set,
                   const std::vector<SequenceSample>& val_set, const TrainConfig& cfg);

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_parameter;
    std::size_t worst_index = 0;
    bool pass = false;
};

// Compares every analytic gradient coordinate against central finite
// differences of the loss. Intended for small models only.
GradCheckReport gradient_check(Model& m, const SequenceSample& sample, double eps = 1e-6,
                               double tol = 1e-4);

// Self-describing text persistence; weights round-trip bit-exactly.
void save_model(const Model& m, const NormalizationStats& stats, const std::string& path);
std::pair<Model, NormalizationStats> load_model(const std::string& path);

}  // namespace grulstm
