#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ptodist/error.hpp"
#include "ptodist/ot.hpp"

namespace ptodist::ot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_k exp(x_k)), tolerating -inf entries.
double log_sum_exp(std::span<const double> x) {
  double hi = kNegInf;
  for (double v : x) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - hi);
  return hi + std::log(s);
}

double safe_log(double w) { return w > 0.0 ? std::log(w) : kNegInf; }

SinkhornResult run_standard(const CostMatrix& cost, std::span<const double> a,
                            std::span<const double> b, const SinkhornOptions& opt) {
  const std::size_t n = cost.rows(), m = cost.cols();
  std::vector<double> kernel(n * m);
  for (std::size_t k = 0; k < n * m; ++k) {
    kernel[k] = std::exp(-cost.data()[k] / opt.epsilon);
    if (kernel[k] == 0.0) {
      throw NumericalError("sinkhorn: kernel exp(-c/epsilon) underflows at epsilon = " +
                           std::to_string(opt.epsilon) + "; use the log-domain mode");
    }
  }
  std::vector<double> u(n, 1.0), v(m, 1.0), kv(n), ktu(m);
  SinkhornResult r;
  for (r.iterations = 1; r.iterations <= opt.max_iter; ++r.iterations) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += kernel[i * m + j] * v[j];
      u[i] = a[i] > 0.0 ? a[i] / s : 0.0;
    }
    std::fill(ktu.begin(), ktu.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) ktu[j] += kernel[i * m + j] * u[i];
    for (std::size_t j = 0; j < m; ++j) v[j] = b[j] > 0.0 ? b[j] / ktu[j] : 0.0;

    double violation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += kernel[i * m + j] * v[j];
      kv[i] = s;
      violation += std::abs(u[i] * s - a[i]);
    }
    if (!std::isfinite(violation)) {
      throw NumericalError("sinkhorn: scaling vectors overflowed; use the log-domain mode");
    }
    r.marginal_violation = violation;
    if (violation < opt.tol) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, opt.max_iter);
  r.plan.matrix = CostMatrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) r.plan.matrix(i, j) = u[i] * kernel[i * m + j] * v[j];
  return r;
}

// Log-domain iteration with absorption: potentials f, g carry the large
// part of the scaling, the kernel exp((f + g - C) / eps) is rebuilt only when
// the residual scalings u, v leave [1e-100, 1e100].
class StabilizedSinkhorn {
 public:
  StabilizedSinkhorn(const CostMatrix& cost, std::span<const double> a, std::span<const double> b,
                     double eps)
      : cost_(cost), a_(a), b_(b), eps_(eps), n_(cost.rows()), m_(cost.cols()),
        f_(n_, 0.0), g_(m_, 0.0), u_(n_, 1.0), v_(m_, 1.0), kernel_(n_ * m_) {
    for (std::size_t i = 0; i < n_; ++i) log_a_.push_back(safe_log(a[i]));
    for (std::size_t j = 0; j < m_; ++j) log_b_.push_back(safe_log(b[j]));
    exact_update();
  }

  // One pair of scaling updates; returns the L1 row-marginal violation.
  double step() {
    std::vector<double> kv(n_, 0.0), ktu(m_, 0.0);
    multiply(v_, kv);
    for (std::size_t i = 0; i < n_; ++i) u_[i] = a_[i] > 0.0 ? a_[i] / kv[i] : 0.0;
    multiply_transposed(u_, ktu);
    for (std::size_t j = 0; j < m_; ++j) v_[j] = b_[j] > 0.0 ? b_[j] / ktu[j] : 0.0;
    if (!scalings_usable()) {
      exact_update();
    } else if (needs_absorption()) {
      absorb();
    }
    multiply(v_, kv);
    double violation = 0.0;
    for (std::size_t i = 0; i < n_; ++i) violation += std::abs(u_[i] * kv[i] - a_[i]);
    return violation;
  }

  CostMatrix plan() const {
    CostMatrix p(n_, m_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) p(i, j) = u_[i] * kernel_[i * m_ + j] * v_[j];
    return p;
  }

 private:
  void multiply(const std::vector<double>& v, std::vector<double>& out) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m_; ++j) s += kernel_[i * m_ + j] * v[j];
      out[i] = s;
    }
  }

  void multiply_transposed(const std::vector<double>& u, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) out[j] += kernel_[i * m_ + j] * u[i];
  }

  bool scalings_usable() const {
    for (double x : u_) if (!std::isfinite(x)) return false;
    for (double x : v_) if (!std::isfinite(x)) return false;
    return true;
  }

  bool needs_absorption() const {
    constexpr double lo = 1e-100, hi = 1e100;
    for (std::size_t i = 0; i < n_; ++i) if (a_[i] > 0.0 && (u_[i] < lo || u_[i] > hi)) return true;
    for (std::size_t j = 0; j < m_; ++j) if (b_[j] > 0.0 && (v_[j] < lo || v_[j] > hi)) return true;
    return false;
  }

  void absorb() {
    for (std::size_t i = 0; i < n_; ++i) f_[i] = a_[i] > 0.0 ? f_[i] + eps_ * std::log(u_[i]) : kNegInf;
    for (std::size_t j = 0; j < m_; ++j) g_[j] = b_[j] > 0.0 ? g_[j] + eps_ * std::log(v_[j]) : kNegInf;
    rebuild();
  }

  // Full log-sum-exp update of both potentials; resets u, v to 1.
  void exact_update() {
    std::vector<double> row(m_), col(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) row[j] = (g_[j] - cost_(i, j)) / eps_;
      f_[i] = log_a_[i] == kNegInf ? kNegInf : eps_ * (log_a_[i] - log_sum_exp(row));
    }
    for (std::size_t j = 0; j < m_; ++j) {
      for (std::size_t i = 0; i < n_; ++i) col[i] = (f_[i] - cost_(i, j)) / eps_;
      g_[j] = log_b_[j] == kNegInf ? kNegInf : eps_ * (log_b_[j] - log_sum_exp(col));
    }
    rebuild();
  }

  void rebuild() {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        kernel_[i * m_ + j] = (f_[i] == kNegInf || g_[j] == kNegInf)
                                  ? 0.0
                                  : std::exp((f_[i] + g_[j] - cost_(i, j)) / eps_);
    std::fill(u_.begin(), u_.end(), 1.0);
    std::fill(v_.begin(), v_.end(), 1.0);
  }

  const CostMatrix& cost_;
  std::span<const double> a_, b_;
  double eps_;
  std::size_t n_, m_;
  std::vector<double> f_, g_, u_, v_, kernel_, log_a_, log_b_;
};

SinkhornResult run_log(const CostMatrix& cost, std::span<const double> a,
                       std::span<const double> b, const SinkhornOptions& opt) {
  StabilizedSinkhorn solver(cost, a, b, opt.epsilon);
  SinkhornResult r;
  r.used_log_domain = true;
  for (r.iterations = 1; r.iterations <= opt.max_iter; ++r.iterations) {
    r.marginal_violation = solver.step();
    if (!std::isfinite(r.marginal_violation)) {
      throw NumericalError("sinkhorn: log-domain iteration produced a non-finite marginal");
    }
    if (r.marginal_violation < opt.tol) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, opt.max_iter);
  r.plan.matrix = solver.plan();
  return r;
}

}  // namespace

SinkhornResult solve_sinkhorn(const CostMatrix& cost, const Marginal& a, const Marginal& b,
                              const SinkhornOptions& options) {
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("sinkhorn: epsilon must be > 0");
  if (options.max_iter < 1) throw std::invalid_argument("sinkhorn: max_iter must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("sinkhorn: tol must be > 0");
  cost.validate();
  if (a.size() != cost.rows() || b.size() != cost.cols()) {
    throw std::invalid_argument("sinkhorn: marginals do not match cost shape " + cost.shape());
  }

  const double max_entry = cost.max_entry();
  bool use_log = options.domain == SinkhornDomain::log;
  if (options.domain == SinkhornDomain::automatic) {
    const bool underflows = std::exp(-max_entry / options.epsilon) == 0.0;
    use_log = options.epsilon < 0.01 * max_entry || underflows;
  }
  SinkhornResult r = use_log ? run_log(cost, a.weights(), b.weights(), options)
                             : run_standard(cost, a.weights(), b.weights(), options);
  r.plan.row_marginal.assign(a.weights().begin(), a.weights().end());
  r.plan.col_marginal.assign(b.weights().begin(), b.weights().end());
  r.cost = transport_cost(r.plan, cost);
  return r;
}

}  // namespace ptodist::ot
