#pragma once

#include "eqboot/bootstrap.hpp"
#include "eqboot/estimators.hpp"
#include "eqboot/experiments.hpp"
#include "eqboot/groups.hpp"
#include "eqboot/operators.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace eqboot {

/// A fully validated and materialized experiment: operator, signal model,
/// estimator, and method arms, plus the resolved-config echo that reproduces
/// the run bit-exactly.
struct Experiment {
    Shape shape{};
    LinearOperator op;
    NoiseModel noise{};
    SignalModel model;
    Estimator estimator;
    std::vector<MethodSpec> methods;
    std::vector<double> levels;
    int n_trials = 0;
    std::uint64_t master_seed = 0;
    std::string output_dir;
    bool force_infinite_radius = false;
    nlohmann::json echo;  // resolved config, defaults included
};

/// Parses a config file; throws ConfigError naming the path and, for JSON
/// syntax errors, the byte offset.
nlohmann::json load_config_file(const std::string& path);

/// Validates against the shipped schema rules (unknown keys rejected, types
/// and ranges checked) and builds every component. Throws ConfigError for
/// schema violations and NumericError for construction failures.
Experiment build_experiment(const nlohmann::json& config);

}  // namespace eqboot
