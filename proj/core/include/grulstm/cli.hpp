#pragma once

#include <string>
#include <vector>

#include "grulstm/training.hpp"

namespace grulstm {

// Fully resolved run configuration. Every field has a documented default;
// resolution precedence is command-line flag > config file > default, and
// the resolved result is echoed into the run's output directory.
struct RunConfig {
    std::string subcommand;

    std::string data_path;
    std::string model = "grulstm";  // gru|lstm|grulstm|tree|forest|gb|xgb
    std::string model_file;         // defaults to <out>/model.txt
    std::string out_dir = "runs";
    std::string config_file;

    TrainConfig train;  // epochs 10, batch 3000, lr 0.001, dropout 0.5, adam, seed 42

    double test_fraction = 0.2;
    bool stratified = false;
    int hidden = 0;  // 0: canonical width for the architecture

    std::string criterion = "gini";  // tree/forest impurity
    int rounds = 0;                  // boosting rounds; 0: per-model default (gb 3000, xgb 200)

    std::string sweep;           // "batch" | "dropout"
    std::vector<double> values;  // sweep values; empty: the default lists

    long long subsample_n = 50000;
};

// args excludes the program name. Throws Error(E_USAGE) naming the
// offending token on any unknown flag, type mismatch or invalid value.
RunConfig parse_config(const std::vector<std::string>& args);

std::string usage_text();

// Runs the subcommand; returns the process exit status (0 success,
// 1 runtime failure reported by the caller, 2 usage).
int dispatch(const RunConfig& cfg);

// Key=value rendering of the resolved config (also the config file format).
std::string config_to_text(const RunConfig& cfg);

}  // namespace grulstm
