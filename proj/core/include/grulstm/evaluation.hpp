#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "grulstm/dataio.hpp"
#include "grulstm/training.hpp"

namespace grulstm {

// 8x8 counts; entry (i, j) = samples of true class i predicted as j.
struct ConfusionMatrix {
    std::array<std::array<long, kNumClasses>, kNumClasses> counts{};
    long total = 0;
};

ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& labels);

struct MetricsReport {
    double accuracy = 0.0;
    std::array<double, kNumClasses> precision{}, recall{}, f1{};
    // Macro averages run over classes present in the labels only.
    double precision_macro = 0.0, recall_macro = 0.0, f1_macro = 0.0;
    // Label-frequency weighted averages, emitted alongside macro.
    double precision_weighted = 0.0, recall_weighted = 0.0, f1_weighted = 0.0;
    // Mean over samples and the 8 sigmoid outputs of
    // [score >= 0.5 agrees with the one-hot target]; only set when raw
    // scores were available.
    std::optional<double> binary_output_accuracy;
};

MetricsReport compute_metrics(const ConfusionMatrix& c);

double binary_output_accuracy(const std::vector<Vector>& scores, const std::vector<int>& labels);

enum class SweepParam { BatchSize, Dropout };

struct SweepEntry {
    double value = 0.0;
    MetricsReport metrics;  // validation metrics of the final epoch
    double final_loss = 0.0;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepEntry> entries;
};

std::vector<double> default_batch_sizes();  // {8,16,32,64,128,296,512,1024}
std::vector<double> default_dropouts();     // {0.2 .. 0.9}

// Trains one fresh model per swept value from the same seed and data;
// entry order follows the input value order.
SweepResult run_sweep(SweepParam param, const std::vector<double>& values,
                      const TrainConfig& base, Architecture arch, const ModelOptions& opts,
                      const std::vector<SequenceSample>& train_set,
                      const std::vector<SequenceSample>& val_set);

enum class EmitFormat { Csv, Text };

// CSV column order:
// epoch,loss,accuracy,precision_macro,recall_macro,f1_macro,
// val_loss,val_accuracy,val_precision_macro,val_recall_macro,val_f1_macro
void emit_history(const EpochHistory& h, const std::string& path, EmitFormat format);

// CSV column order:
// value,final_loss,val_accuracy,val_precision_macro,val_recall_macro,val_f1_macro
void emit_sweep(const SweepResult& s, const std::string& path, EmitFormat format);

void write_metrics_report(const MetricsReport& r, const std::string& path);
std::string metrics_to_text(const MetricsReport& r);

}  // namespace grulstm
