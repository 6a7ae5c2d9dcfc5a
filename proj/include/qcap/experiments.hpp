#pragma once

// End-to-end numerical studies over the channel, info and optimize modules.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcap/info.hpp"
#include "qcap/optimize.hpp"

namespace qcap {

enum class VerdictStatus { pass, fail, inconclusive };
const char* verdict_status_name(VerdictStatus s);

/// Relation between the operands:
///   "<="  pass iff lhs <= rhs + tolerance
///   "=="  pass iff |lhs - rhs| <= tolerance
///   ">"   pass iff lhs > rhs + tolerance, fail iff lhs < rhs - tolerance,
///         inconclusive otherwise
struct Verdict {
  std::string name;
  std::string inequality;  // human-readable form with operand names
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  VerdictStatus status = VerdictStatus::fail;
  bool hard = true;  // hard verdicts decide the exit status
};

/// Status implied by (relation, lhs, rhs, tolerance).
VerdictStatus judge(const std::string& relation, double lhs, double rhs, double tolerance);
Verdict make_verdict(std::string name, std::string inequality, std::string relation, double lhs, double rhs,
                     double tolerance, bool hard);

struct StudyReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json points = nlohmann::json::array();
  std::vector<Verdict> verdicts;

  bool hard_verdicts_pass() const;
};

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const StudyReport& r);
nlohmann::json optimizer_summary(const OptimizeResult& r);

/// Embeds each block ensemble into its slot of the direct-sum input, with
/// block weights proportional to 2^{chi_i}.
Ensemble cross_block_ensemble(const std::vector<Ensemble>& blocks, const std::vector<double>& chis);

StudyReport study_direct_sum_lemma(const OptimizerConfig& cfg);
StudyReport study_platypus_superadditivity(const std::vector<std::size_t>& d_list, const OptimizerConfig& cfg);
StudyReport study_additive_complement(std::size_t d, std::size_t k_max, const OptimizerConfig& cfg);

std::vector<std::size_t> default_platypus_dlist();

}  // namespace qcap
