#include "qcap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Eigenvalues>

#include "qcap/kernels.hpp"
#include "qcap/unitaries.hpp"

namespace qcap {

namespace {

using Index = Eigen::Index;

// Eigenvalues below this are treated as outside the support when forming
// log(sigma); for full-rank inputs the perturbation N(d rho) has no weight
// there, so dropping them does not bias the gradient.
constexpr double kLogFloor = 1e-13;

struct EntropyParts {
  double entropy;
  ComplexMatrix log2;  // log2 of the matrix on its support, 0 elsewhere
};

EntropyParts entropy_and_log(const ComplexMatrix& sigma) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sigma + sigma.adjoint()));
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  const double total = ev.sum();
  if (total > 0.0) ev /= total;
  double s = 0.0;
  RealVector logs(ev.size());
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kLogFloor) {
      logs(i) = std::log2(ev(i));
      s -= ev(i) * logs(i);
    } else {
      if (ev(i) > 0.0) s -= ev(i) * std::log2(ev(i));
      logs(i) = 0.0;
    }
  }
  const ComplexMatrix& u = es.eigenvectors();
  return {s, u * logs.asDiagonal() * u.adjoint()};
}

// Packs a complex block as [Re, Im] column-major.
ComplexMatrix unpack_block(const RealVector& x, Index offset, Index rows, Index cols) {
  ComplexMatrix g(rows, cols);
  const Index n = rows * cols;
  for (Index k = 0; k < n; ++k) g(k % rows, k / rows) = Complex(x(offset + k), x(offset + n + k));
  return g;
}

void pack_block(const ComplexMatrix& g, RealVector& x, Index offset) {
  const Index rows = g.rows();
  const Index n = g.size();
  for (Index k = 0; k < n; ++k) {
    x(offset + k) = g(k % rows, k / rows).real();
    x(offset + n + k) = g(k % rows, k / rows).imag();
  }
}

// Gradient of f(rho(G)) w.r.t. (Re G, Im G) given Gamma = df/drho.
ComplexMatrix factor_gradient(const ComplexMatrix& gamma, const ComplexMatrix& g) {
  const ComplexMatrix gg = g * g.adjoint();
  const double t = gg.trace().real();
  const Complex c = (gamma * gg).trace() / t;
  return (2.0 / t) * (gamma * g - c.real() * g);
}

class Problem {
 public:
  virtual ~Problem() = default;
  virtual Index size() const = 0;
  virtual double value(const RealVector& x) const = 0;
  virtual double value_grad(const RealVector& x, RealVector& grad) const = 0;
  virtual RealVector initial(int restart, std::mt19937_64& rng) const = 0;
  virtual void normalize(RealVector& x) const = 0;
};

// Evaluates f over flag branches; sums in branch order.
template <class F>
double sum_branches(const std::vector<BranchRef>& branches, F f) {
  if (branches.size() == 1) return f(*branches.front().channel);
  const auto vals = kernels::parallel::map_indexed(
      branches.size(), [&](std::size_t i) { return branches[i].probability * f(*branches[i].channel); });
  return kernels::compensated_sum(vals);
}

class CoherentProblem final : public Problem {
 public:
  CoherentProblem(std::vector<BranchRef> branches, Index dim, Index rank)
      : branches_(std::move(branches)), dim_(dim), rank_(rank) {}

  Index size() const override { return 2 * dim_ * rank_; }

  ComplexMatrix state(const RealVector& x) const {
    const ComplexMatrix g = unpack_block(x, 0, dim_, rank_);
    return DensityMatrix::from_factor(g).matrix();
  }

  double value(const RealVector& x) const override {
    const ComplexMatrix rho = state(x);
    return sum_branches(branches_, [&](const StinespringChannel& c) {
      return entropy_bits(c.output(rho)) - entropy_bits(c.env_output(rho));
    });
  }

  double value_grad(const RealVector& x, RealVector& grad) const override {
    const ComplexMatrix g = unpack_block(x, 0, dim_, rank_);
    const ComplexMatrix rho = DensityMatrix::from_factor(g).matrix();
    struct Part {
      double value;
      ComplexMatrix gamma;
    };
    auto eval = [&](const StinespringChannel& c) {
      const EntropyParts b = entropy_and_log(c.output(rho));
      const EntropyParts e = entropy_and_log(c.env_output(rho));
      return Part{b.entropy - e.entropy, c.env_output_adjoint(e.log2) - c.output_adjoint(b.log2)};
    };
    std::vector<Part> parts;
    if (branches_.size() == 1) {
      parts.push_back(eval(*branches_.front().channel));
    } else {
      parts = kernels::parallel::map_indexed(branches_.size(),
                                             [&](std::size_t i) { return eval(*branches_[i].channel); });
    }
    std::vector<double> vals(parts.size());
    ComplexMatrix gamma = ComplexMatrix::Zero(dim_, dim_);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      vals[i] = branches_[i].probability * parts[i].value;
      gamma += branches_[i].probability * parts[i].gamma;
    }
    grad.resize(size());
    pack_block(factor_gradient(0.5 * (gamma + gamma.adjoint()), g), grad, 0);
    return kernels::compensated_sum(vals);
  }

  RealVector initial(int restart, std::mt19937_64& rng) const override {
    ComplexMatrix g;
    if (restart == 0) {
      g = ComplexMatrix::Identity(dim_, rank_);
    } else if (restart == 1) {
      g = 1e-4 * ginibre(dim_, rank_, rng);
      ComplexVector psi = ginibre(dim_, 1, rng).col(0);
      g.col(0) += psi / psi.norm();
    } else {
      g = ginibre(dim_, rank_, rng);
    }
    RealVector x(size());
    pack_block(g, x, 0);
    return x;
  }

  void normalize(RealVector& x) const override { x /= x.norm(); }

 private:
  std::vector<BranchRef> branches_;
  Index dim_;
  Index rank_;
};

class PrivateProblem final : public Problem {
 public:
  PrivateProblem(std::vector<BranchRef> branches, Index dim, Index rank, Index members)
      : branches_(std::move(branches)), dim_(dim), rank_(rank), members_(members) {}

  Index size() const override { return members_ + members_ * block(); }

  Ensemble ensemble(const RealVector& x) const {
    const RealVector p = weights(x);
    std::vector<EnsembleMember> out;
    for (Index m = 0; m < members_; ++m)
      out.push_back({p(m), DensityMatrix::from_factor(unpack_block(x, offset(m), dim_, rank_))});
    return Ensemble(std::move(out));
  }

  double value(const RealVector& x) const override {
    const Ensemble ens = ensemble(x);
    return sum_branches(branches_, [&](const StinespringChannel& c) { return private_information_value(c, ens); });
  }

  double value_grad(const RealVector& x, RealVector& grad) const override {
    const RealVector p = weights(x);
    std::vector<ComplexMatrix> factors, states;
    for (Index m = 0; m < members_; ++m) {
      factors.push_back(unpack_block(x, offset(m), dim_, rank_));
      states.push_back(DensityMatrix::from_factor(factors.back()).matrix());
    }
    struct Part {
      double value;
      RealVector dp;                     // df/dp_m
      std::vector<ComplexMatrix> gamma;  // df/drho_m
    };
    auto side = [&](const StinespringChannel& c, bool env, Part& part, double sign) {
      std::vector<ComplexMatrix> outs;
      ComplexMatrix avg;
      for (Index m = 0; m < members_; ++m) {
        outs.push_back(env ? c.env_output(states[m]) : c.output(states[m]));
        avg = m == 0 ? ComplexMatrix(p(m) * outs.back()) : ComplexMatrix(avg + p(m) * outs.back());
      }
      const EntropyParts mean = entropy_and_log(avg);
      const ComplexMatrix mean_adj = env ? c.env_output_adjoint(mean.log2) : c.output_adjoint(mean.log2);
      double chi = mean.entropy;
      for (Index m = 0; m < members_; ++m) {
        const EntropyParts mem = entropy_and_log(outs[m]);
        chi -= p(m) * mem.entropy;
        const ComplexMatrix mem_adj = env ? c.env_output_adjoint(mem.log2) : c.output_adjoint(mem.log2);
        part.gamma[m] += sign * p(m) * (mem_adj - mean_adj);
        part.dp(m) += sign * (-(outs[m] * mean.log2).trace().real() - mem.entropy);
      }
      part.value += sign * chi;
    };
    auto eval = [&](const StinespringChannel& c) {
      Part part{0.0, RealVector::Zero(members_), std::vector<ComplexMatrix>(members_, ComplexMatrix::Zero(dim_, dim_))};
      side(c, false, part, 1.0);
      side(c, true, part, -1.0);
      return part;
    };
    std::vector<Part> parts;
    if (branches_.size() == 1) {
      parts.push_back(eval(*branches_.front().channel));
    } else {
      parts = kernels::parallel::map_indexed(branches_.size(),
                                             [&](std::size_t i) { return eval(*branches_[i].channel); });
    }
    std::vector<double> vals(parts.size());
    RealVector dp = RealVector::Zero(members_);
    std::vector<ComplexMatrix> gamma(members_, ComplexMatrix::Zero(dim_, dim_));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const double w = branches_[i].probability;
      vals[i] = w * parts[i].value;
      dp += w * parts[i].dp;
      for (Index m = 0; m < members_; ++m) gamma[m] += w * parts[i].gamma[m];
    }
    grad.resize(size());
    const double mean_dp = p.dot(dp);
    for (Index m = 0; m < members_; ++m) grad(m) = p(m) * (dp(m) - mean_dp);
    for (Index m = 0; m < members_; ++m)
      pack_block(factor_gradient(0.5 * (gamma[m] + gamma[m].adjoint()), factors[m]), grad, offset(m));
    return kernels::compensated_sum(vals);
  }

  RealVector initial(int restart, std::mt19937_64& rng) const override {
    RealVector x = RealVector::Zero(size());
    for (Index m = 0; m < members_; ++m) {
      ComplexMatrix g;
      if (restart == 0) {
        // near-basis members: |m mod dA> plus a small full-rank perturbation
        g = 1e-3 * ginibre(dim_, rank_, rng);
        g(m % dim_, 0) += 1.0;
      } else if (restart == 1) {
        g = 1e-4 * ginibre(dim_, rank_, rng);
        ComplexVector psi = ginibre(dim_, 1, rng).col(0);
        g.col(0) += psi / psi.norm();
      } else {
        g = ginibre(dim_, rank_, rng);
      }
      pack_block(g, x, offset(m));
    }
    if (restart >= 2) {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Index m = 0; m < members_; ++m) x(m) = normal(rng);
    }
    return x;
  }

  void normalize(RealVector& x) const override {
    x.head(members_).array() -= x.head(members_).mean();
    for (Index m = 0; m < members_; ++m) {
      auto seg = x.segment(offset(m), block());
      seg /= seg.norm();
    }
  }

 private:
  Index block() const { return 2 * dim_ * rank_; }
  Index offset(Index m) const { return members_ + m * block(); }

  RealVector weights(const RealVector& x) const {
    RealVector z = x.head(members_);
    z.array() -= z.maxCoeff();
    RealVector p = z.array().exp();
    p /= p.sum();
    // keep every weight strictly positive so the ensemble stays valid
    return p.cwiseMax(1e-300);
  }

  std::vector<BranchRef> branches_;
  Index dim_;
  Index rank_;
  Index members_;
};

struct RestartOutcome {
  double value;
  RealVector x;
  int iterations;
  bool converged;
};

RestartOutcome ascend(const Problem& problem, RealVector x, const OptimizerConfig& cfg) {
  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;
  constexpr int kMaxShrinks = 60;
  problem.normalize(x);
  RealVector grad;
  double f = problem.value_grad(x, grad);
  std::vector<double> history{f};
  double step = 1.0;
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iters; ++iter) {
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-24) {
      converged = true;
      break;
    }
    step = std::min(step * 2.0, 1e8);
    bool accepted = false;
    RealVector trial;
    double f_trial = f;
    for (int s = 0; s < kMaxShrinks; ++s) {
      trial = x + step * grad;
      f_trial = problem.value(trial);
      if (std::isfinite(f_trial) && f_trial >= f + kArmijo * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= kShrink;
    }
    if (!accepted) {
      converged = true;  // no ascent direction left at working precision
      break;
    }
    x = std::move(trial);
    problem.normalize(x);
    f = problem.value_grad(x, grad);
    history.push_back(f);
    const auto n = static_cast<int>(history.size());
    if (n > cfg.patience && history[n - 1] - history[n - 1 - cfg.patience] < cfg.tol) {
      converged = true;
      ++iter;
      break;
    }
  }
  return {f, std::move(x), iter, converged};
}

template <class MakeProblem, class Finish>
OptimizeResult run_restarts(const OptimizerConfig& cfg, MakeProblem make, Finish finish) {
  if (cfg.restarts < 1) throw DomainError("optimizer needs at least one restart");
  if (!(cfg.tol > 0.0)) throw DomainError("optimizer tolerance must be positive");
  const std::unique_ptr<Problem> problem = make();
  const auto outcomes = kernels::parallel::map_indexed(static_cast<std::size_t>(cfg.restarts), [&](std::size_t r) {
    std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(r));
    return ascend(*problem, problem->initial(static_cast<int>(r), rng), cfg);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].value > outcomes[best].value + 1e-12) best = r;
  OptimizeResult result = finish(*problem, outcomes[best].x);
  for (const auto& o : outcomes) result.restarts_summary.push_back(o.value);
  result.best_restart = static_cast<int>(best);
  result.iterations_used = outcomes[best].iterations;
  result.converged = outcomes[best].converged;
  return result;
}

Index resolve_rank(const OptimizerConfig& cfg, Index dim) {
  if (!cfg.rank) return dim;
  if (*cfg.rank < 1) throw DomainError("rank must be positive");
  return std::min<Index>(*cfg.rank, dim);
}

}  // namespace

OptimizeResult maximize_coherent_information(const AnyChannel& ch, const OptimizerConfig& cfg) {
  const auto dim = static_cast<Index>(dim_in(ch));
  check_dim(static_cast<std::size_t>(dim), "optimizer input dimension");
  const Index rank = resolve_rank(cfg, dim);
  return run_restarts(
      cfg, [&] { return std::make_unique<CoherentProblem>(branches_of(ch), dim, rank); },
      [&](const Problem& p, const RealVector& x) {
        const auto& cp = static_cast<const CoherentProblem&>(p);
        DensityMatrix rho = DensityMatrix::assume_valid(cp.state(x));
        OptimizeResult r{coherent_information(ch, rho), std::move(rho), {}, 0, 0, false};
        return r;
      });
}

OptimizeResult maximize_private_information(const AnyChannel& ch, const OptimizerConfig& cfg) {
  const auto dim = static_cast<Index>(dim_in(ch));
  check_dim(static_cast<std::size_t>(dim), "optimizer input dimension");
  const Index rank = resolve_rank(cfg, dim);
  const Index members = cfg.ensemble_size > 0 ? cfg.ensemble_size : 2 * dim;
  return run_restarts(
      cfg, [&] { return std::make_unique<PrivateProblem>(branches_of(ch), dim, rank, members); },
      [&](const Problem& p, const RealVector& x) {
        const auto& pp = static_cast<const PrivateProblem&>(p);
        Ensemble ens = pp.ensemble(x);
        OptimizeResult r{private_information_value(ch, ens), std::move(ens), {}, 0, 0, false};
        return r;
      });
}

GradientCheckReport gradient_selfcheck(const AnyChannel& ch, std::uint64_t seed, Objective objective,
                                       const OptimizerConfig& cfg) {
  const auto dim = static_cast<Index>(dim_in(ch));
  const Index rank = resolve_rank(cfg, dim);
  std::unique_ptr<Problem> problem;
  if (objective == Objective::coherent) {
    problem = std::make_unique<CoherentProblem>(branches_of(ch), dim, rank);
  } else {
    const Index members = cfg.ensemble_size > 0 ? cfg.ensemble_size : 2 * dim;
    problem = std::make_unique<PrivateProblem>(branches_of(ch), dim, rank, members);
  }
  GradientCheckReport report;
  std::mt19937_64 rng(seed);
  for (int point = 0; point < 5; ++point) {
    RealVector x = problem->initial(2, rng);  // Ginibre: interior, full rank
    problem->normalize(x);
    RealVector analytic;
    problem->value_grad(x, analytic);
    RealVector numeric(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      RealVector xp = x, xm = x;
      xp(i) += report.step;
      xm(i) -= report.step;
      numeric(i) = (problem->value(xp) - problem->value(xm)) / (2.0 * report.step);
    }
    const double err = (analytic - numeric).norm() / std::max(numeric.norm(), 1e-12);
    report.relative_errors.push_back(err);
    report.max_relative_error = std::max(report.max_relative_error, err);
  }
  return report;
}

}  // namespace qcap
