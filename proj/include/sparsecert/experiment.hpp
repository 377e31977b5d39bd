#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsecert/hypergraph.hpp"

namespace sparsecert {

enum class HypergraphKind { cyclic, complete, grid };

/// How the candidate (B, xbar) is derived from the generated (A, x).
enum class Perturbation {
  dictionary_jitter,  ///< B = A + E, xbar = x
  permuted_jitter,    ///< B = (A + E) D^-1 P^T, xbar = P D x
  code_jitter,        ///< B = A, xbar = x + d with d on the support of x
};

struct ExperimentConfig {
  int m = 4;
  int n = 4;
  int k = 2;
  HypergraphKind hypergraph = HypergraphKind::cyclic;
  int per_support = 7;
  std::vector<double> eps_grid{1e-4, 1e-3, 1e-2};
  /// Read eps_grid as fractions of each instance's eps_max_dictionary.
  bool eps_relative = false;
  int trials = 20;
  std::uint64_t seed = 1;
  Perturbation family = Perturbation::dictionary_jitter;
  double slack = 1e-9;
};

/// One (seed, eps) evaluation. The code columns describe the code with the
/// smallest margin bound6 - max_code_err, so pass6 <=> max_code_err <=
/// bound6 + slack over all codes.
struct ExperimentRecord {
  std::uint64_t seed = 0;
  double target_eps = 0.0;
  double eps = 0.0;  ///< realized max per-sample residual
  double max_col_err = 0.0;
  double bound5 = 0.0;
  std::optional<double> max_code_err;
  std::optional<double> bound6;
  bool pass5 = false;
  std::optional<bool> pass6;
  bool lower_bound_ok = true;
  double c1 = 0.0;
  double ms = 0.0;
};

struct ExperimentSummary {
  std::vector<ExperimentRecord> records;
  std::size_t instances = 0;
  std::size_t skipped_above_threshold = 0;  ///< grid points at or above L2/C1
  std::size_t pass5 = 0;
  std::size_t checked6 = 0;
  std::size_t pass6 = 0;
  std::size_t lower_bound_failures = 0;
  /// Least-squares slope through the origin of max_col_err against eps.
  double slope = 0.0;
  /// max over records of max_col_err / (C1 eps); at most 1 when the column bound holds.
  double max_bound_ratio = 0.0;
  double seconds = 0.0;
};

Hypergraph build_hypergraph(HypergraphKind kind, int m, int k);

/// Throws CapExceeded for configurations beyond desk scale and
/// std::invalid_argument for malformed ones.
void validate(const ExperimentConfig& config);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Header: seed,eps,max_col_err,bound5,max_code_err,bound6,pass5,pass6,ms.
/// Absent code columns are written as NA.
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

nlohmann::json summary_to_json(const ExperimentSummary& summary);

}  // namespace sparsecert
