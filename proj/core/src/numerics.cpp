#include "twsync/numerics.hpp"

#include <cmath>
#include <numeric>

namespace twsync {

CovX::CovX(double sigma_a2, double sigma_r2, std::size_t n)
    : sigma_a2_(sigma_a2), sigma_r2_(sigma_r2), n_(n) {
  if (!(sigma_r2_ > 0.0)) {
    throw SingularCovariance("TOR covariance is singular: sigma_r^2 must be > 0");
  }
  if (!(sigma_a2_ >= 0.0)) {
    throw std::invalid_argument("sigma_a^2 must be >= 0");
  }
  if (n_ == 0) {
    throw std::invalid_argument("covariance dimension must be >= 1");
  }
}

DenseSymMatrix DenseSymMatrix::identity(std::size_t n) {
  DenseSymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

DenseSymMatrix DenseSymMatrix::from_cov(const CovX& cov) {
  DenseSymMatrix m(cov.n());
  for (std::size_t i = 0; i < cov.n(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, cov.entry(i, j));
  }
  return m;
}

std::vector<double> DenseSymMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw std::invalid_argument("dimension mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += data_[i * n_ + j] * v[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> DenseSymMatrix::multiply(const DenseSymMatrix& other) const {
  if (other.n_ != n_) throw std::invalid_argument("dimension mismatch");
  std::vector<double> out(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_; ++k) acc += (*this)(i, k) * other(k, j);
      out[i * n_ + j] = acc;
    }
  }
  return out;
}

std::vector<double> covx_inv_apply(const CovX& cov, std::span<const double> v) {
  if (v.size() != cov.n()) {
    throw std::invalid_argument("covx_inv_apply: dimension mismatch");
  }
  const auto n = static_cast<double>(cov.n());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  const double mean_gain = mean / (cov.sigma_r2() + n * cov.sigma_a2());
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = (v[i] - mean) / cov.sigma_r2() + mean_gain;
  }
  return w;
}

QuadForms quad_forms(const CovX& cov, std::span<const double> delta,
                     std::span<const double> x) {
  if (delta.size() != cov.n() || x.size() != cov.n()) {
    throw std::invalid_argument("quad_forms: dimension mismatch");
  }
  const std::vector<double> ones(cov.n(), 1.0);
  const auto w_ones = covx_inv_apply(cov, ones);
  const auto w_delta = covx_inv_apply(cov, delta);

  QuadForms q{};
  q.b = std::accumulate(w_ones.begin(), w_ones.end(), 0.0);
  q.d = std::accumulate(w_delta.begin(), w_delta.end(), 0.0);
  q.c = std::inner_product(w_ones.begin(), w_ones.end(), x.begin(), 0.0);
  q.e = std::inner_product(w_delta.begin(), w_delta.end(), x.begin(), 0.0);
  q.f = std::inner_product(w_delta.begin(), w_delta.end(), delta.begin(), 0.0);
  return q;
}

double population_variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const auto n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / n;
}

double centered_cross(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("centered_cross: dimension mismatch");
  }
  if (a.empty()) return 0.0;
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s;
}

double mean_intercept(std::span<const double> x, std::span<const double> delta,
                      double slope) {
  if (x.size() != delta.size() || x.empty()) {
    throw std::invalid_argument("mean_intercept: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::fma(-slope, delta[i], x[i]);
  return s / static_cast<double>(x.size());
}

LineFit fit_line(std::span<const double> delta, std::span<const double> x) {
  if (delta.size() != x.size() || delta.size() < 2) {
    throw std::invalid_argument("fit_line: need two or more matching points");
  }
  const double sxx = centered_cross(delta, delta);
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: constant abscissa");

  const double hi = centered_cross(delta, x) / sxx;
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::fma(-hi, delta[i], x[i]);
  const double lo = centered_cross(delta, r) / sxx;

  const auto n = static_cast<double>(x.size());
  const double mean_r = std::accumulate(r.begin(), r.end(), 0.0) / n;
  const double mean_d = std::accumulate(delta.begin(), delta.end(), 0.0) / n;

  LineFit fit;
  fit.slope = hi + lo;
  fit.slope_lo = lo - (fit.slope - hi);
  fit.intercept = mean_r - lo * mean_d;
  return fit;
}

double information_determinant(const CovX& cov, std::span<const double> delta) {
  if (delta.size() != cov.n()) {
    throw std::invalid_argument("information_determinant: dimension mismatch");
  }
  const auto n = static_cast<double>(cov.n());
  const double sxx = n * population_variance(delta);
  return n * sxx /
         (cov.sigma_r2() * (cov.sigma_r2() + n * cov.sigma_a2()));
}

DenseSymMatrix generic_spd_inverse(const DenseSymMatrix& m) {
  const std::size_t n = m.n();
  // Lower-triangular Cholesky factor, row-major.
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(diag);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = m(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = acc / ljj;
    }
  }

  // inv(L) by forward substitution, column by column.
  std::vector<double> linv(n * n, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    linv[col * n + col] = 1.0 / l[col * n + col];
    for (std::size_t i = col + 1; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = col; k < i; ++k) acc -= l[i * n + k] * linv[k * n + col];
      linv[i * n + col] = acc / l[i * n + i];
    }
  }

  // inv(M) = inv(L)^T inv(L)
  DenseSymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t k = i; k < n; ++k) acc += linv[k * n + i] * linv[k * n + j];
      out.set(i, j, acc);
    }
  }
  return out;
}

DenseSymMatrix alpha1_cov(std::span<const double> d, double sigma_r) {
  if (d.empty()) throw std::invalid_argument("alpha1_cov: empty spacing vector");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] != 0.0) || !std::isfinite(d[i])) {
      throw std::invalid_argument("alpha1_cov: spacing " + std::to_string(i + 1) +
                                  " must be finite and non-zero");
    }
  }
  const double s2 = sigma_r * sigma_r;
  DenseSymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double value =
          i == j ? 2.0 * s2 / (d[i] * d[i]) : s2 / (d[i] * d[j]);
      m.set(i, j, value);
    }
  }
  return m;
}

}  // namespace twsync
