// qcap: command-line front end.
//
// Exit codes: 0 ok, 2 usage or parse error, 3 dimension cap, 4 parameter
// validity, 5 a checked verdict failed, 1 anything else.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcap/bounds.hpp"
#include "qcap/channel_spec.hpp"
#include "qcap/errors.hpp"
#include "qcap/experiments.hpp"
#include "qcap/optimize.hpp"
#include "qcap/protocol.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitValidity = 4;
constexpr int kExitVerdict = 5;

constexpr double kFidelityTol = 1e-10;
constexpr double kEq7Tol = 1e-6;

// Round every floating value to 12 significant digits.
json rounded(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::stod(qcap::bounds::format_number(v));
  }
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

std::string scalar_text(const json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return qcap::bounds::format_number(j.get<double>());
  return j.dump();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// json: pretty document; csv: "key,value" rows of the flattened document;
// text: "key = value" lines.
std::string render(const json& doc, const std::string& format) {
  const json r = rounded(doc);
  if (format == "json") return r.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(r, "", rows);
  std::string out = format == "csv" ? "key,value\n" : "";
  for (const auto& [k, v] : rows)
    out += format == "csv" ? csv_field(k) + "," + csv_field(v) + "\n" : k + " = " + v + "\n";
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
}

json matrix_json(const qcap::ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"dim", m.rows()}, {"real", re}, {"imag", im}};
}

json result_json(const std::string& command, const qcap::ChannelSpec& spec, const qcap::OptimizeResult& r) {
  json doc = {{"command", command},
              {"spec", qcap::print_channel_spec(spec)},
              {"value", r.value},
              {"best_restart", r.best_restart},
              {"iterations_used", r.iterations_used},
              {"converged", r.converged},
              {"restarts_summary", r.restarts_summary}};
  if (const auto* rho = std::get_if<qcap::DensityMatrix>(&r.argmax)) {
    doc["argmax"] = matrix_json(rho->matrix());
  } else {
    json members = json::array();
    for (const auto& m : std::get<qcap::Ensemble>(r.argmax).members())
      members.push_back({{"probability", m.probability}, {"state", matrix_json(m.state.matrix())}});
    doc["argmax"] = {{"members", members}};
  }
  return doc;
}

struct OptimizerFlags {
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_iters = 2000;
  double tol = 1e-7;
  int rank = 0;
  int ensemble_size = 0;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "random seed (default 0)");
    app->add_option("--restarts", restarts, "optimizer restarts")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", max_iters, "iterations per restart")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "stopping tolerance")->check(CLI::PositiveNumber);
    app->add_option("--rank", rank, "factor rank of the input state (0 = full)")->check(CLI::NonNegativeNumber);
    app->add_option("--ensemble-size", ensemble_size, "private-information ensemble size (0 = 2 dA)")
        ->check(CLI::NonNegativeNumber);
  }

  qcap::OptimizerConfig config() const {
    qcap::OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    if (rank > 0) cfg.rank = rank;
    cfg.ensemble_size = ensemble_size;
    return cfg;
  }
};

struct BoundFlags {
  std::int64_t n = 0;
  double p = 0.0;
  std::int64_t alpha = 0;

  void add(CLI::App* app) {
    app->add_option("--n", n, "number of rocket copies")->required();
    app->add_option("--p", p, "erasure probability")->required();
    app->add_option("--alpha", alpha, "exponent in log2 d = n^alpha")->required();
  }
  qcap::bounds::BoundParams params() const { return qcap::bounds::make_params(n, p, alpha); }
};

const char* pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

using qcap::bounds::format_number;

int check_eq24(const qcap::bounds::BoundParams& bp) {
  const auto k = qcap::bounds::eq24_min_k(bp);
  std::cout << "eq24: (k-1)/k >= (2 + n^alpha p) / ((1-p)(n+1) n^(alpha-1)), rhs = "
            << format_number(qcap::bounds::eq24_rhs(bp)) << "\n";
  if (k) {
    std::cout << "min_k = " << *k << " PASS\n";
    return kExitOk;
  }
  std::cout << "min_k = none FAIL\n";
  return kExitVerdict;
}

int check_thm1(const qcap::bounds::BoundParams& bp) {
  if (!bp.thm1_ok) throw qcap::ValidityError("thm1_ok", "need p = 1/2 and n^(alpha-2) > 8");
  double worst = 0.0;
  int at = 1;
  for (int k = 1; k <= bp.n; ++k) {
    const double g = qcap::bounds::theorem1_gap(bp.n, bp.alpha, k);
    if (k == 1 || g < worst) {
      worst = g;
      at = k;
    }
  }
  const bool ok = worst > 0.0;
  std::cout << "thm1: (n^alpha - 4n(k+1)) / (2k(k+1)) > 0 for 1 <= k <= n, min = " << format_number(worst)
            << " at k = " << at << " " << pass_fail(ok) << "\n";
  return ok ? kExitOk : kExitVerdict;
}

int check_thm2(const qcap::bounds::BoundParams& bp) {
  using namespace qcap::bounds;
  if (!bp.thm2_ok) throw qcap::ValidityError("thm2_ok", "need 1/3 < p <= 1/2 - 1/n^(alpha-1), n^(alpha-2) > 12");
  double min_f = 0.0, min_fc = 0.0;
  int at_f = 0, at_fc = 0;
  for (int k = 1; k <= bp.n; ++k) {
    const Gaps g = theorem2_gaps(bp, k);
    if (g.f && (at_f == 0 || *g.f < min_f)) {
      min_f = *g.f;
      at_f = k;
    }
    if (at_fc == 0 || g.fc < min_fc) {
      min_fc = g.fc;
      at_fc = k;
    }
  }
  bool all = true;
  if (at_f != 0) {
    const bool ok = min_f > 0.0;
    all = all && ok;
    std::cout << "f(k) > 0 for 2 <= k <= n, min = " << format_number(min_f) << " at k = " << at_f << " "
              << pass_fail(ok) << "\n";
  }
  const bool ok_c = min_fc > 0.0;
  all = all && ok_c;
  std::cout << "fc(k) > 0 for 1 <= k <= n, min = " << format_number(min_fc) << " at k = " << at_fc << " "
            << pass_fail(ok_c) << "\n";
  if (bp.lemmaB_ok) {
    const BoundTable t = lemma_b1(bp, 1);
    const double p1_max = std::max(t.p_upper, t.pc_upper);
    const double q2 = L(bp, 2.0);
    const bool ok = q2 > p1_max;
    all = all && ok;
    std::cout << "Q2 lower L(2) = " << format_number(q2) << " > P1_max upper = " << format_number(p1_max) << " "
              << pass_fail(ok) << "\n";
  }
  return all ? kExitOk : kExitVerdict;
}

int check_thm3(const qcap::bounds::BoundParams& bp) {
  using namespace qcap::bounds;
  const double kz = k0(bp);
  std::cout << "k0 = " << format_number(kz) << "\n";
  const auto best = theorem3_max_k(bp);
  for (int k = 1; k <= static_cast<int>(std::floor(kz + 1e-12)); ++k)
    std::cout << "c(" << k << ") = " << format_number(theorem3_c(bp, k)) << "\n";
  if (best) {
    std::cout << "largest k <= k0 with c(k) < n+1: max_k = " << *best << " PASS\n";
    return kExitOk;
  }
  std::cout << "largest k <= k0 with c(k) < n+1: max_k = none FAIL\n";
  return kExitVerdict;
}

int check_lemma(const qcap::bounds::BoundParams& bp, int k) {
  using namespace qcap::bounds;
  const BoundTable t = lemma_b1(bp, k);
  const double na = bp.log2_d;
  // the lemma bound must equal the three-case maximum it was derived from
  const double direct_max = std::max({2.0 * static_cast<double>(bp.n), U(bp, k), (1.0 - 2.0 * bp.p) * na});
  const double comp_max = std::max(2.0 * static_cast<double>(bp.n), Uc(bp, k));
  const bool ok_p = std::abs(t.p_upper - direct_max) <= 1e-12 * std::max(1.0, direct_max);
  const bool ok_c = k == 1 || std::abs(t.pc_upper - comp_max) <= 1e-12 * std::max(1.0, comp_max);
  std::cout << "k = " << k << ", k0 = " << format_number(k0(bp)) << "\n";
  std::cout << "P^(k)(N) upper = " << format_number(t.p_upper) << " vs case maximum " << format_number(direct_max)
            << " " << pass_fail(ok_p) << "\n";
  std::cout << "P^(k)(N^c) upper = " << format_number(t.pc_upper) << " vs case maximum " << format_number(comp_max)
            << " " << pass_fail(ok_c) << "\n";
  if (t.q_next_lower) std::cout << "Q^(k+1)(N) lower = " << format_number(*t.q_next_lower) << "\n";
  if (t.qc_next_lower) std::cout << "Q^(k+1)(N^c) lower = " << format_number(*t.qc_next_lower) << "\n";
  return ok_p && ok_c ? kExitOk : kExitVerdict;
}

int check_fig2(const qcap::bounds::BoundParams& bp) {
  const auto rows = qcap::bounds::figure2(bp);
  const auto k = qcap::bounds::figure2_crossing(rows);
  if (!k) {
    std::cout << "figure2 crossing: none FAIL\n";
    return kExitVerdict;
  }
  std::cout << "figure2 crossing: U_k < Qmax up to k = " << *k << ", U_k >= Qmax from k = " << *k + 1 << " PASS\n";
  return kExitOk;
}

json table_row_json(const qcap::bounds::BoundTable& t) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"k", t.k},   {"p_upper", t.p_upper}, {"pc_upper", t.pc_upper}, {"q_next_lower", opt(t.q_next_lower)},
          {"qc_next_lower", opt(t.qc_next_lower)}, {"U", t.U}, {"L", t.L}, {"Uc", t.Uc}, {"Lc", t.Lc},
          {"U1", t.U1}, {"U2", t.U2}, {"f", opt(t.f)}, {"fc", opt(t.fc)}};
}

std::string table_csv(const json& rows) {
  static const char* cols[] = {"k",  "p_upper", "pc_upper", "q_next_lower", "qc_next_lower", "U", "L",
                               "Uc", "Lc",      "U1",       "U2",           "f",             "fc"};
  std::string out;
  for (std::size_t i = 0; i < std::size(cols); ++i) out += std::string(i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < std::size(cols); ++i) out += std::string(i ? "," : "") + scalar_text(r[cols[i]]);
    out += "\n";
  }
  return out;
}

std::vector<qcap::Variant> variants_for(const std::string& v) {
  if (v == "direct") return {qcap::Variant::direct};
  if (v == "complement") return {qcap::Variant::complement};
  return {qcap::Variant::direct, qcap::Variant::complement};
}

json eq7_json(const qcap::Eq7Report& r) {
  return {{"d", r.d},
          {"p", r.p},
          {"variant", qcap::variant_name(r.variant)},
          {"mode", r.mode},
          {"n_flags", r.n_flags},
          {"value_bits", r.value_bits},
          {"target_bits", r.target_bits},
          {"stderr_bits", r.stderr_bits},
          {"seed", r.seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel capacity toolbox: construction, optimization, protocol simulation and bounds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string format = "json";
  std::string out_path;
  const std::vector<std::string> formats = {"json", "csv", "text"};

  // q1 / p1
  std::string spec_text;
  OptimizerFlags opt_flags;
  auto* q1 = app.add_subcommand("q1", "maximize coherent information (lower bound on Q1)");
  auto* p1 = app.add_subcommand("p1", "maximize private information (lower bound on P1)");
  for (auto* sub : {q1, p1}) {
    sub->add_option("--spec", spec_text, "channel expression")->required();
    opt_flags.add(sub);
    sub->add_option("--format", format, "json | csv | text")->check(CLI::IsMember(formats));
    sub->add_option("--out", out_path, "write to file instead of stdout");
  }

  // bounds
  BoundFlags bflags;
  int k_max = 0;
  int k_single = 0;
  std::string theorem;
  std::string bformat = "csv";
  auto* bounds = app.add_subcommand("bounds", "closed-form bound tables, figure data and threshold checks");
  bounds->require_subcommand(1);
  auto* fig1 = bounds->add_subcommand("figure1", "log2 f and log2 fc against k");
  auto* fig2 = bounds->add_subcommand("figure2", "U_k and Qmax against k");
  auto* table = bounds->add_subcommand("table", "every bound function at k = 1..kmax");
  auto* check = bounds->add_subcommand("check", "evaluate a theorem predicate and print PASS or FAIL");
  for (auto* sub : {fig1, fig2, table, check}) bflags.add(sub);
  for (auto* sub : {fig1, fig2, table}) {
    sub->add_option("--out", out_path, "write to file instead of stdout");
    sub->add_option("--format", bformat, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  }
  fig1->add_option("--kmax", k_max, "last k (default n)")->check(CLI::PositiveNumber);
  table->add_option("--kmax", k_max, "last k (default n)")->check(CLI::PositiveNumber);
  check->add_option("--theorem", theorem, "eq24 | thm1 | thm2 | thm3 | lemma | fig2")
      ->required()
      ->check(CLI::IsMember({"eq24", "thm1", "thm2", "thm3", "lemma", "fig2"}));
  check->add_option("--k", k_single, "k for --theorem lemma (default 1)")->check(CLI::PositiveNumber);

  // protocol
  std::size_t pd = 2;
  double pp = 0.5;
  std::string variant = "both";
  std::string unitaries;
  std::size_t samples = 0;
  std::uint64_t pseed = 0;
  bool eq7 = false;
  auto* protocol = app.add_subcommand("protocol", "entanglement-assisted rocket protocol simulation");
  protocol->add_option("--d", pd, "local dimension")->check(CLI::Range(2, 1 << 20));
  protocol->add_option("--p", pp, "erasure probability (with --eq7)")->check(CLI::Range(0.0, 1.0));
  protocol->add_option("--variant", variant, "direct | complement | both")
      ->check(CLI::IsMember({"direct", "complement", "both"}));
  protocol->add_option("--unitaries", unitaries, "clifford | haar (default clifford at d = 2, haar otherwise)")
      ->check(CLI::IsMember({"clifford", "haar"}));
  protocol->add_option("--samples", samples, "number of unitary pairs (protocol default 50)")
      ->check(CLI::PositiveNumber);
  protocol->add_option("--seed", pseed, "random seed (default 0)");
  protocol->add_flag("--eq7", eq7, "evaluate the rocket (x) erasure coherent information instead");
  protocol->add_option("--format", format, "json | csv | text")->check(CLI::IsMember(formats));
  protocol->add_option("--out", out_path, "write to file instead of stdout");

  // study
  auto* study = app.add_subcommand("study", "scripted numerical studies");
  study->require_subcommand(1);
  auto* s_dsum = study->add_subcommand("direct-sum", "direct-sum lemma cross-checks");
  auto* s_plat = study->add_subcommand("platypus", "platypus superadditivity scan");
  auto* s_add = study->add_subcommand("additive-complement", "additivity of the platypus complement");
  std::vector<std::size_t> dlist = qcap::default_platypus_dlist();
  std::size_t sd = 3;
  std::size_t skmax = 2;
  s_plat->add_option("--dlist", dlist, "comma separated d values")->delimiter(',');
  s_add->add_option("--d", sd, "dimension")->check(CLI::Range(2, 1 << 20));
  s_add->add_option("--kmax", skmax, "total number of channel copies")->check(CLI::PositiveNumber);
  for (auto* sub : {s_dsum, s_plat, s_add}) {
    opt_flags.add(sub);
    sub->add_option("--format", format, "json | csv | text")->check(CLI::IsMember(formats));
    sub->add_option("--out", out_path, "write to file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*q1 || *p1) {
      const qcap::ChannelSpec spec = qcap::parse_channel_spec(spec_text);
      const qcap::AnyChannel ch = qcap::build(spec);
      const auto cfg = opt_flags.config();
      const bool is_q1 = static_cast<bool>(*q1);
      const auto r = is_q1 ? qcap::maximize_coherent_information(ch, cfg) : qcap::maximize_private_information(ch, cfg);
      emit(render(result_json(is_q1 ? "q1" : "p1", spec, r), format), out_path);
      return kExitOk;
    }

    if (*bounds) {
      const auto bp = bflags.params();
      if (*fig1) {
        const auto rows = qcap::bounds::figure1(bp, k_max > 0 ? k_max : static_cast<int>(bp.n));
        std::string text;
        if (bformat == "csv") {
          text = qcap::bounds::figure1_csv(rows);
        } else {
          json arr = json::array();
          for (const auto& r : rows)
            arr.push_back({{"k", r.k},
                           {"log2_f", r.log2_f ? json(*r.log2_f) : json(nullptr)},
                           {"log2_fc", r.log2_fc ? json(*r.log2_fc) : json(nullptr)}});
          text = rounded(json{{"rows", arr}}).dump(2) + "\n";
        }
        emit(text, out_path);
        if (!out_path.empty()) std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
        return kExitOk;
      }
      if (*fig2) {
        const auto rows = qcap::bounds::figure2(bp);
        const auto crossing = qcap::bounds::figure2_crossing(rows);
        std::string text;
        if (bformat == "csv") {
          text = qcap::bounds::figure2_csv(rows);
        } else {
          json arr = json::array();
          for (const auto& r : rows) arr.push_back({{"k", r.k}, {"U_k", r.U_k}, {"Qmax", r.Qmax}});
          text = rounded(json{{"rows", arr}, {"crossing_k", crossing ? json(*crossing) : json(nullptr)}}).dump(2) +
                 "\n";
        }
        emit(text, out_path);
        std::ostream& info = out_path.empty() ? std::cerr : std::cout;
        if (!out_path.empty()) info << "wrote " << rows.size() << " rows to " << out_path << "\n";
        if (crossing)
          info << "crossing at k = " << *crossing << " (U_k < Qmax for k <= " << *crossing << ")\n";
        else
          info << "crossing: none\n";
        return kExitOk;
      }
      if (*table) {
        const int last = k_max > 0 ? k_max : static_cast<int>(bp.n);
        json rows = json::array();
        for (int k = 1; k <= last; ++k) rows.push_back(table_row_json(qcap::bounds::lemma_b1(bp, k)));
        rows = rounded(rows);
        emit(bformat == "csv" ? table_csv(rows) : json{{"rows", rows}}.dump(2) + "\n", out_path);
        return kExitOk;
      }
      if (theorem == "eq24") return check_eq24(bp);
      if (theorem == "thm1") return check_thm1(bp);
      if (theorem == "thm2") return check_thm2(bp);
      if (theorem == "thm3") return check_thm3(bp);
      if (theorem == "lemma") return check_lemma(bp, k_single > 0 ? k_single : 1);
      return check_fig2(bp);
    }

    if (*protocol) {
      const qcap::UnitarySource source =
          unitaries.empty() ? (pd == 2 ? qcap::UnitarySource::clifford : qcap::UnitarySource::haar)
                            : (unitaries == "clifford" ? qcap::UnitarySource::clifford : qcap::UnitarySource::haar);
      std::optional<std::size_t> n_samples;
      if (samples > 0) n_samples = samples;
      json doc = {{"command", "protocol"}, {"d", pd}, {"unitaries", qcap::unitary_source_name(source)},
                  {"seed", pseed}};
      bool ok = true;
      if (eq7) {
        json reports = json::array();
        for (auto v : variants_for(variant)) {
          const auto rep = qcap::evaluate_eq7(pd, pp, source, n_samples, pseed, v);
          ok = ok && rep.value_bits >= rep.target_bits - kEq7Tol;
          reports.push_back(eq7_json(rep));
        }
        doc["eq7"] = reports;
        doc["meets_target"] = ok;
      } else {
        if (!n_samples) n_samples = 50;
        const auto pairs = qcap::unitary_pairs(pd, source, n_samples, pseed);
        json runs = json::array();
        double overall_min = 1.0;
        for (auto v : variants_for(variant)) {
          double mn = 1.0, sum = 0.0, norm_err = 0.0;
          qcap::RegisterTrace trace;
          for (const auto& [u, w] : pairs) {
            const auto run = qcap::run_rocket_protocol(pd, u, w, v);
            mn = std::min(mn, run.fidelity);
            sum += run.fidelity;
            norm_err = std::max(norm_err, run.correction_norm_error);
            trace = run.register_trace;
          }
          json regs = json::array();
          for (const auto& [name, dim] : trace) regs.push_back({{"name", name}, {"dim", dim}});
          runs.push_back({{"variant", qcap::variant_name(v)},
                          {"n_pairs", pairs.size()},
                          {"min_fidelity", mn},
                          {"mean_fidelity", sum / static_cast<double>(pairs.size())},
                          {"max_correction_norm_error", norm_err},
                          {"register_trace", regs}});
          overall_min = std::min(overall_min, mn);
        }
        ok = overall_min >= 1.0 - kFidelityTol;
        doc["samples"] = *n_samples;
        doc["runs"] = runs;
        doc["min_fidelity"] = overall_min;
        doc["pass"] = ok;
      }
      emit(render(doc, format), out_path);
      return ok ? kExitOk : kExitVerdict;
    }

    if (*study) {
      const auto cfg = opt_flags.config();
      qcap::StudyReport rep;
      if (*s_dsum) {
        rep = qcap::study_direct_sum_lemma(cfg);
      } else if (*s_plat) {
        rep = qcap::study_platypus_superadditivity(dlist, cfg);
      } else {
        rep = qcap::study_additive_complement(sd, skmax, cfg);
      }
      emit(render(qcap::to_json(rep), format), out_path);
      return rep.hard_verdicts_pass() ? kExitOk : kExitVerdict;
    }
  } catch (const qcap::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qcap::DimensionCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const qcap::ValidityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidity;
  } catch (const qcap::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}
