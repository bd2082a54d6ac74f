#include "hcbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hcbo/errors.hpp"
#include "hcbo/local_opt.hpp"

namespace hcbo {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

double weight_for(bool categorical, double length_scale) {
  return categorical ? 1.0 / length_scale : 0.5 / (length_scale * length_scale);
}

// Cholesky of R + jitter*I with escalating jitter; returns the jitter used or
// NaN when even the largest jitter fails.
double factorize(const Eigen::MatrixXd& r, Eigen::LLT<Eigen::MatrixXd>& llt) {
  for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0001; jitter *= 10.0) {
    Eigen::MatrixXd k = r;
    k.diagonal().array() += jitter;
    llt.compute(k);
    if (llt.info() == Eigen::Success) return jitter;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

GpModel GpModel::prepare(const DesignSpace& space, const std::vector<DesignVector>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("GP fit: x and y sizes differ");
  if (x.size() < 2) throw TooFewPoints("GP fit needs at least 2 points");
  for (double v : y)
    if (!std::isfinite(v)) throw ConfigError("GP fit: targets must be finite");

  GpModel m;
  m.space_ = space;
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto d = static_cast<Eigen::Index>(space.n_vars());
  m.categorical_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) m.categorical_[j] = space.variables()[j].kind == VarKind::categorical;

  m.u_.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = space.encode(x[i]);
    for (Eigen::Index j = 0; j < d; ++j) m.u_(i, j) = u[j];
  }

  Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
  m.y_mean_ = yv.mean();
  const double var = (yv.array() - m.y_mean_).square().mean();
  m.y_std_ = std::sqrt(var);
  const double scale = std::max(1.0, std::abs(m.y_mean_));
  if (!(m.y_std_ > 1e-12 * scale)) {
    m.constant_ = true;
    m.y_std_ = 1.0;
  }
  m.ys_ = (yv.array() - m.y_mean_) / m.y_std_;
  return m;
}

void GpModel::finalize(const std::vector<double>& length_scales) {
  const Eigen::Index n = u_.rows();
  const Eigen::Index d = u_.cols();
  length_scales_ = length_scales;
  weights_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) weights_[j] = weight_for(categorical_[j], length_scales_[j]);
  if (constant_) {
    sigma2_ = 0.0;
    jitter_ = kJitterStart;
    alpha_ = Eigen::VectorXd::Zero(n);
    return;
  }

  Eigen::MatrixXd r(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    r(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double diff = u_(a, j) - u_(b, j);
        s += weights_[j] * (categorical_[j] ? (diff != 0.0 ? 1.0 : 0.0) : diff * diff);
      }
      r(a, b) = r(b, a) = std::exp(-s);
    }
  }
  jitter_ = factorize(r, llt_);
  if (std::isnan(jitter_)) throw SingularKernel("kernel matrix not positive definite after jitter escalation");
  alpha_ = llt_.solve(ys_);
  sigma2_ = std::max(ys_.dot(alpha_) / static_cast<double>(n), 0.0);
  const Eigen::MatrixXd l = llt_.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  log_likelihood_ = -0.5 * static_cast<double>(n) * std::log(std::max(sigma2_, 1e-300)) - 0.5 * log_det;
}

GpModel GpModel::fit_fixed(const DesignSpace& space, const std::vector<DesignVector>& x,
                           const std::vector<double>& y, const std::vector<double>& length_scales) {
  if (length_scales.size() != space.n_vars()) throw ConfigError("GP fit: one length-scale per variable required");
  GpModel m = prepare(space, x, y);
  m.finalize(length_scales);
  return m;
}

GpModel GpModel::fit(const DesignSpace& space, const std::vector<DesignVector>& x, const std::vector<double>& y,
                     const GpOptions& options) {
  GpModel m = prepare(space, x, y);
  const Eigen::Index n = m.u_.rows();
  const Eigen::Index d = m.u_.cols();
  if (m.constant_ || d == 0) {
    m.finalize(std::vector<double>(d, 1.0));
    return m;
  }

  // Per-variable squared (or mismatch) distance matrices, upper triangle packed.
  const Eigen::Index n_pairs = n * (n - 1) / 2;
  Eigen::MatrixXd dist(n_pairs, d);
  {
    Eigen::Index p = 0;
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a + 1; b < n; ++b, ++p)
        for (Eigen::Index j = 0; j < d; ++j) {
          const double diff = m.u_(a, j) - m.u_(b, j);
          dist(p, j) = m.categorical_[j] ? (diff != 0.0 ? 1.0 : 0.0) : diff * diff;
        }
  }

  const double lo = std::log10(options.length_scale_lower);
  const double hi = std::log10(options.length_scale_upper);
  std::vector<double> lower(d, lo), upper(d, hi);
  Eigen::MatrixXd r(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd w(d);

  auto neg_log_likelihood = [&](std::span<const double> theta) {
    for (Eigen::Index j = 0; j < d; ++j) w[j] = weight_for(m.categorical_[j], std::pow(10.0, theta[j]));
    const Eigen::VectorXd s = dist * w;
    Eigen::Index p = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
      r(a, a) = 1.0;
      for (Eigen::Index b = a + 1; b < n; ++b, ++p) r(a, b) = r(b, a) = std::exp(-s[p]);
    }
    if (std::isnan(factorize(r, llt))) return 1e300;
    const double quad = m.ys_.dot(llt.solve(m.ys_));
    if (!(quad > 0.0)) return 1e300;
    double log_det = 0.0;
    const auto& lm = llt.matrixLLT();
    for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(lm(i, i));
    return 0.5 * static_cast<double>(n) * std::log(quad / static_cast<double>(n)) + 0.5 * log_det;
  };

  std::vector<std::vector<double>> starts;
  if (options.warm_start.size() == static_cast<std::size_t>(d)) {
    std::vector<double> t(d);
    for (Eigen::Index j = 0; j < d; ++j)
      t[j] = std::clamp(std::log10(std::max(options.warm_start[j], 1e-300)), lo, hi);
    starts.push_back(std::move(t));
  }
  starts.emplace_back(d, 0.0);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  while (static_cast<int>(starts.size()) < std::max(options.n_starts, 1)) {
    std::vector<double> t(d);
    for (auto& v : t) v = uni(rng);
    starts.push_back(std::move(t));
  }

  LocalOptResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    auto res = nelder_mead_box(neg_log_likelihood, s, lower, upper, options.max_evaluations_per_start, 1e-6, 0.25);
    if (res.value < best.value) best = std::move(res);
  }

  std::vector<double> ls(d);
  for (Eigen::Index j = 0; j < d; ++j) ls[j] = std::pow(10.0, best.x[j]);
  m.finalize(ls);
  return m;
}

void GpModel::kernel_row(const Eigen::Ref<const Eigen::RowVectorXd>& u, Eigen::Ref<Eigen::RowVectorXd> out,
                         bool& exact) const {
  const Eigen::Index n = u_.rows();
  const Eigen::Index d = u_.cols();
  exact = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    bool same = true;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double diff = u[j] - u_(i, j);
      if (diff != 0.0) same = false;
      s += weights_[j] * (categorical_[j] ? (diff != 0.0 ? 1.0 : 0.0) : diff * diff);
    }
    out[i] = std::exp(-s);
    // Exact matches see the nugget too, so training points are reproduced exactly.
    if (same) {
      out[i] += jitter_;
      exact = true;
    }
  }
}

GpPrediction GpModel::predict(const DesignVector& x) const {
  std::vector<double> mean, std;
  predict(std::vector<DesignVector>{x}, mean, std);
  return {mean[0], std[0]};
}

void GpModel::predict(const std::vector<DesignVector>& x, std::vector<double>& mean, std::vector<double>& std) const {
  const auto m = static_cast<Eigen::Index>(x.size());
  mean.assign(m, y_mean_);
  std.assign(m, 0.0);
  if (constant_ || m == 0) return;

  const Eigen::Index n = u_.rows();
  const Eigen::Index d = u_.cols();
  Eigen::MatrixXd ks(n, m);
  std::vector<double> prior(m, 1.0);
  Eigen::RowVectorXd u(d), row(n);
  for (Eigen::Index q = 0; q < m; ++q) {
    const auto enc = space_.encode(x[q]);
    for (Eigen::Index j = 0; j < d; ++j) u[j] = enc[j];
    bool exact = false;
    kernel_row(u, row, exact);
    if (exact) prior[q] += jitter_;
    ks.col(q) = row.transpose();
  }
  const Eigen::VectorXd mu = ks.transpose() * alpha_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(ks);
  for (Eigen::Index q = 0; q < m; ++q) {
    mean[q] = y_mean_ + y_std_ * mu[q];
    const double var = sigma2_ * std::max(prior[q] - v.col(q).squaredNorm(), 0.0);
    std[q] = y_std_ * std::sqrt(var);
  }
}

}  // namespace hcbo
