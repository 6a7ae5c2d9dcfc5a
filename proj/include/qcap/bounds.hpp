#pragma once

// Closed-form capacity bounds for N_{n,p,d} = R_d^{(x)n} (+) E_{p,d} with
// d = 2^{n^alpha}. Everything is in bits, so only log2 d = n^alpha is ever
// needed; d itself never appears.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcap::bounds {

struct BoundParams {
  std::int64_t n = 0;
  double p = 0.0;
  std::int64_t alpha = 0;
  double log2_d = 0.0;    // n^alpha
  bool log2_d_exact = false;  // n^alpha fit in 128-bit integer arithmetic

  bool thm1_ok = false;    // p = 1/2 and n^(alpha-2) > 8
  bool thm2_ok = false;    // 1/3 < p <= 1/2 - 1/n^(alpha-1) and n^(alpha-2) > 12
  bool lemmaB_ok = false;  // 4/n^(alpha-1) <= p <= 1/2 - 1/n^(alpha-1), alpha > 1
};

/// Validates n >= 1, alpha >= 1, p in [0,1] and fills the derived fields.
BoundParams make_params(std::int64_t n, double p, std::int64_t alpha);

/// n^e for any integer e (negative exponents give 1/n^|e|).
double int_power(std::int64_t n, std::int64_t e);

struct BoundTable {
  int k = 0;
  // Capacity bounds at this k
  double p_upper = 0.0;                 // P^(k)(N) upper
  double pc_upper = 0.0;                // P^(k)(N^c) upper
  std::optional<double> q_next_lower;   // Q^(k+1)(N) lower, k <= n
  std::optional<double> qc_next_lower;  // Q^(k+1)(N^c) lower, k <= n
  // Named functions evaluated at k
  double U = 0.0, L = 0.0, Uc = 0.0, Lc = 0.0, U1 = 0.0, U2 = 0.0;  // U1 = U', U2 = U''
  std::optional<double> f, fc;  // only inside the theorem ranges
};

// Named bound functions (no validity checks).
double U(const BoundParams& bp, double k);
double L(const BoundParams& bp, double j);
double Uc(const BoundParams& bp, double k);
double Lc(const BoundParams& bp, double j);
double U_prime(const BoundParams& bp, double k);
double U_double_prime(const BoundParams& bp, double k);

BoundTable lemma_b1(const BoundParams& bp, int k);
double k0(const BoundParams& bp);
double theorem1_gap(std::int64_t n, std::int64_t alpha, int k);

struct Gaps {
  std::optional<double> f;  // 2 <= k <= n
  double fc;                // 1 <= k <= n
};
Gaps theorem2_gaps(const BoundParams& bp, int k);

/// (2 + n^alpha p) / ((1-p)(n+1) n^(alpha-1)).
double eq24_rhs(const BoundParams& bp);
/// Smallest k <= n with (k-1)/k >= eq24_rhs, if any.
std::optional<int> eq24_min_k(const BoundParams& bp);

double theorem3_c(const BoundParams& bp, int k);
/// Largest k <= k0 with c(k) < j_max (default n+1), if any.
std::optional<int> theorem3_max_k(const BoundParams& bp, std::optional<double> j_max = std::nullopt);

struct Figure1Row {
  int k;
  std::optional<double> log2_f;
  std::optional<double> log2_fc;
};
struct Figure2Row {
  int k;
  double U_k;
  double Qmax;
};

std::vector<Figure1Row> figure1(const BoundParams& bp, int k_max);
std::vector<Figure2Row> figure2(const BoundParams& bp);
/// Last k with U_k < Qmax followed by a row with U_k >= Qmax.
std::optional<int> figure2_crossing(const std::vector<Figure2Row>& rows);

/// Numbers are written with 12 significant digits.
std::string figure1_csv(const std::vector<Figure1Row>& rows);
std::string figure2_csv(const std::vector<Figure2Row>& rows);
std::string format_number(double v);

}  // namespace qcap::bounds
