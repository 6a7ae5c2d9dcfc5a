#include "qcap/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap::bounds {

namespace {

// Inequalities at the edges of the validity ranges are compared with a
// relative slack so that e.g. p = 0.4999 passes "p <= 1/2 - 1/n^2" at n = 100.
constexpr double kSlack = 1e-12;

bool leq(double a, double b) { return a <= b + kSlack * std::max(1.0, std::abs(b)); }

// Exact n^e for e >= 0 when it fits in 128 bits.
std::optional<__int128> exact_power(std::int64_t n, std::int64_t e) {
  __int128 acc = 1;
  const __int128 limit = (static_cast<__int128>(1) << 120);
  for (std::int64_t i = 0; i < e; ++i) {
    acc *= n;
    if (acc > limit || acc < -limit) return std::nullopt;
  }
  return acc;
}

void require(bool ok, const char* predicate, const std::string& detail) {
  if (!ok) throw ValidityError(predicate, detail);
}

std::string describe(const BoundParams& bp) {
  std::ostringstream os;
  os << "n=" << bp.n << ", p=" << bp.p << ", alpha=" << bp.alpha;
  return os.str();
}

void require_k(const BoundParams& bp, int k, int lo) {
  if (k < lo || k > bp.n)
    throw ValidityError(std::to_string(lo) + " <= k <= n", "k=" + std::to_string(k) + ", n=" + std::to_string(bp.n));
}

}  // namespace

double int_power(std::int64_t n, std::int64_t e) {
  if (e >= 0) {
    if (auto v = exact_power(n, e)) return static_cast<double>(*v);
    return static_cast<double>(std::pow(static_cast<long double>(n), static_cast<long double>(e)));
  }
  return 1.0 / int_power(n, -e);
}

BoundParams make_params(std::int64_t n, double p, std::int64_t alpha) {
  if (n < 1) throw ValidityError("n >= 1", "n=" + std::to_string(n));
  if (alpha < 1) throw ValidityError("alpha >= 1", "alpha=" + std::to_string(alpha));
  if (!(p >= 0.0 && p <= 1.0)) throw ValidityError("0 <= p <= 1", "p=" + std::to_string(p));
  BoundParams bp;
  bp.n = n;
  bp.p = p;
  bp.alpha = alpha;
  const auto exact = exact_power(n, alpha);
  bp.log2_d_exact = exact.has_value();
  bp.log2_d = int_power(n, alpha);
  const double n_am1 = int_power(n, alpha - 1);
  const double n_am2 = int_power(n, alpha - 2);
  bp.thm1_ok = p == 0.5 && n_am2 > 8.0;
  bp.thm2_ok = 1.0 / 3.0 < p && leq(p, 0.5 - 1.0 / n_am1) && n_am2 > 12.0;
  bp.lemmaB_ok = alpha > 1 && leq(4.0 / n_am1, p) && leq(p, 0.5 - 1.0 / n_am1);
  return bp;
}

double U(const BoundParams& bp, double k) {
  return 2.0 * static_cast<double>(bp.n) / k + (k - 1.0) / k * (1.0 - bp.p) * bp.log2_d;
}

double L(const BoundParams& bp, double j) { return (j - 1.0) / j * (1.0 - bp.p) * bp.log2_d; }

double Uc(const BoundParams& bp, double k) {
  return 2.0 * static_cast<double>(bp.n) / k + (k - 1.0) / k * bp.p * bp.log2_d;
}

double Lc(const BoundParams& bp, double j) { return (j - 1.0) / j * bp.p * bp.log2_d; }

double U_prime(const BoundParams& bp, double k) {
  return (1.0 - 2.0 * bp.p) * bp.log2_d + 2.0 * static_cast<double>(bp.n) / k + (k - 1.0) / k * bp.p * bp.log2_d;
}

double U_double_prime(const BoundParams& bp, double k) {
  return 4.0 * static_cast<double>(bp.n) / k + (k - 1.0) / k * bp.log2_d;
}

double k0(const BoundParams& bp) {
  if (bp.p == 0.0) throw ValidityError("p > 0", describe(bp));
  return (1.0 - bp.p - 2.0 / int_power(bp.n, bp.alpha - 1)) / bp.p;
}

BoundTable lemma_b1(const BoundParams& bp, int k) {
  require(bp.lemmaB_ok, "lemmaB_ok", "need 4/n^(alpha-1) <= p <= 1/2 - 1/n^(alpha-1), alpha > 1 (" + describe(bp) + ")");
  if (k < 1) throw ValidityError("k >= 1", "k=" + std::to_string(k));
  BoundTable t;
  t.k = k;
  const double kk = k;
  t.p_upper = leq(kk, k0(bp)) ? (1.0 - 2.0 * bp.p) * bp.log2_d : U(bp, kk);
  t.pc_upper = Uc(bp, kk);
  if (k <= bp.n) {
    t.q_next_lower = L(bp, kk + 1.0);
    t.qc_next_lower = Lc(bp, kk + 1.0);
  }
  t.U = U(bp, kk);
  t.L = L(bp, kk);
  t.Uc = Uc(bp, kk);
  t.Lc = Lc(bp, kk);
  t.U1 = U_prime(bp, kk);
  t.U2 = U_double_prime(bp, kk);
  if (bp.thm2_ok && k <= bp.n) {
    const Gaps g = theorem2_gaps(bp, k);
    t.f = g.f;
    t.fc = g.fc;
  }
  return t;
}

double theorem1_gap(std::int64_t n, std::int64_t alpha, int k) {
  if (n < 1 || alpha < 1) throw ValidityError("n, alpha >= 1", "n=" + std::to_string(n));
  require(int_power(n, alpha - 2) > 8.0, "n^(alpha-2) > 8",
          "n=" + std::to_string(n) + ", alpha=" + std::to_string(alpha));
  if (k < 1 || k > n) throw ValidityError("1 <= k <= n", "k=" + std::to_string(k));
  const double na = int_power(n, alpha);
  const double kk = k;
  return (na - 4.0 * static_cast<double>(n) * (kk + 1.0)) / (2.0 * kk * (kk + 1.0));
}

Gaps theorem2_gaps(const BoundParams& bp, int k) {
  require(bp.thm2_ok, "thm2_ok", "need 1/3 < p <= 1/2 - 1/n^(alpha-1), n^(alpha-2) > 12 (" + describe(bp) + ")");
  require_k(bp, k, 1);
  const double kk = k;
  const double n = static_cast<double>(bp.n);
  Gaps g;
  if (k >= 2) g.f = (bp.log2_d * (1.0 - bp.p) - 2.0 * n * (kk + 1.0)) / (kk * (kk + 1.0));
  g.fc = (bp.log2_d * bp.p - 2.0 * n * (kk + 1.0)) / (kk * (kk + 1.0));
  return g;
}

double eq24_rhs(const BoundParams& bp) {
  return (2.0 + bp.log2_d * bp.p) /
         ((1.0 - bp.p) * static_cast<double>(bp.n + 1) * int_power(bp.n, bp.alpha - 1));
}

std::optional<int> eq24_min_k(const BoundParams& bp) {
  require(bp.thm2_ok, "thm2_ok", "need 1/3 < p <= 1/2 - 1/n^(alpha-1), n^(alpha-2) > 12 (" + describe(bp) + ")");
  const double rhs = eq24_rhs(bp);
  for (std::int64_t k = 1; k <= bp.n; ++k) {
    const double kk = static_cast<double>(k);
    if ((kk - 1.0) / kk >= rhs) return static_cast<int>(k);
  }
  return std::nullopt;
}

double theorem3_c(const BoundParams& bp, int k) {
  require(bp.lemmaB_ok, "lemmaB_ok", "need 4/n^(alpha-1) <= p <= 1/2 - 1/n^(alpha-1), alpha > 1 (" + describe(bp) + ")");
  const double floor_p = 2.0 / int_power(bp.n, bp.alpha - 1);
  require(bp.p > floor_p, "p > 2/n^(alpha-1)", describe(bp));
  if (k < 1 || !leq(k, k0(bp))) throw ValidityError("1 <= k <= k0", "k=" + std::to_string(k));
  return (1.0 - bp.p) * static_cast<double>(k) / (bp.p - floor_p);
}

std::optional<int> theorem3_max_k(const BoundParams& bp, std::optional<double> j_max) {
  const double jm = j_max.value_or(static_cast<double>(bp.n + 1));
  const double kmax = k0(bp);
  std::optional<int> best;
  for (int k = 1; leq(k, kmax); ++k) {
    if (theorem3_c(bp, k) < jm) best = k;
  }
  return best;
}

std::vector<Figure1Row> figure1(const BoundParams& bp, int k_max) {
  require(bp.thm2_ok, "thm2_ok", "need 1/3 < p <= 1/2 - 1/n^(alpha-1), n^(alpha-2) > 12 (" + describe(bp) + ")");
  require_k(bp, k_max, 1);
  std::vector<Figure1Row> rows;
  for (int k = 1; k <= k_max; ++k) {
    const Gaps g = theorem2_gaps(bp, k);
    Figure1Row row{k, std::nullopt, std::nullopt};
    if (g.f && *g.f > 0.0) row.log2_f = std::log2(*g.f);
    if (g.fc > 0.0) row.log2_fc = std::log2(g.fc);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Figure2Row> figure2(const BoundParams& bp) {
  require(bp.lemmaB_ok, "lemmaB_ok", "need 4/n^(alpha-1) <= p <= 1/2 - 1/n^(alpha-1), alpha > 1 (" + describe(bp) + ")");
  const double kz = k0(bp);
  const double qmax = L(bp, static_cast<double>(bp.n + 1));
  std::vector<Figure2Row> rows;
  for (std::int64_t k = 1; k <= bp.n; ++k) {
    const double kk = static_cast<double>(k);
    rows.push_back({static_cast<int>(k), leq(kk, kz) ? U_prime(bp, kk) : U_double_prime(bp, kk), qmax});
  }
  return rows;
}

std::optional<int> figure2_crossing(const std::vector<Figure2Row>& rows) {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i].U_k < rows[i].Qmax && !(rows[i + 1].U_k < rows[i + 1].Qmax)) return rows[i].k;
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string figure1_csv(const std::vector<Figure1Row>& rows) {
  std::string out = "k,log2_f,log2_fc\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ",";
    if (r.log2_f) out += format_number(*r.log2_f);
    out += ",";
    if (r.log2_fc) out += format_number(*r.log2_fc);
    out += "\n";
  }
  return out;
}

std::string figure2_csv(const std::vector<Figure2Row>& rows) {
  std::string out = "k,U_k,Qmax\n";
  for (const auto& r : rows)
    out += std::to_string(r.k) + "," + format_number(r.U_k) + "," + format_number(r.Qmax) + "\n";
  return out;
}

}  // namespace qcap::bounds
