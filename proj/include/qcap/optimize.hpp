#pragma once

// Numerical lower bounds on Q^(1) and P^(1).
//
// States are parameterized as rho = G G^dagger / tr(G G^dagger) with G a
// dA x rank complex factor; ensembles as softmax weights plus one factor
// per member. Ascent is plain gradient ascent with Armijo backtracking on
// an analytic gradient. Every reported value is recomputed from the
// returned argmax with the info module, so it is a genuine lower bound.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/info.hpp"

namespace qcap {

struct OptimizerConfig {
  int restarts = 20;
  int max_iters = 2000;
  double tol = 1e-7;  // stop when the gain over `patience` iterations is below tol
  int patience = 25;
  std::uint64_t seed = 0;
  std::optional<int> rank;  // empty = full rank
  int ensemble_size = 0;    // 0 = 2 * dA
};

struct OptimizeResult {
  double value = 0.0;
  std::variant<DensityMatrix, Ensemble> argmax;
  std::vector<double> restarts_summary;  // final value of every restart, by index
  int best_restart = 0;
  int iterations_used = 0;  // of the best restart
  bool converged = false;   // of the best restart
};

OptimizeResult maximize_coherent_information(const AnyChannel& ch, const OptimizerConfig& cfg);
OptimizeResult maximize_private_information(const AnyChannel& ch, const OptimizerConfig& cfg);

enum class Objective { coherent, private_info };

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::vector<double> relative_errors;  // one per sampled point
  double step = 1e-5;
};

/// Analytic gradient vs central differences at 5 random interior points.
GradientCheckReport gradient_selfcheck(const AnyChannel& ch, std::uint64_t seed,
                                       Objective objective = Objective::coherent,
                                       const OptimizerConfig& cfg = {});

}  // namespace qcap
