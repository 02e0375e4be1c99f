#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twsync {

// Raised when a covariance has no inverse (sigma_r = 0).
class SingularCovariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by generic_spd_inverse when factorization meets a non-positive pivot.
class NotPositiveDefinite : public std::domain_error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : std::domain_error("matrix is not positive definite (pivot " +
                          std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

// Covariance of the TOR vector, sigma_r^2 * I + sigma_a^2 * 1 1^T, kept in
// implicit form. The diagonal is sigma_a^2 + sigma_r^2, every off-diagonal
// entry is sigma_a^2.
class CovX {
 public:
  // Throws SingularCovariance if sigma_r2 <= 0, std::invalid_argument on
  // negative sigma_a2 or n == 0.
  CovX(double sigma_a2, double sigma_r2, std::size_t n);

  double sigma_a2() const { return sigma_a2_; }
  double sigma_r2() const { return sigma_r2_; }
  std::size_t n() const { return n_; }

  double entry(std::size_t row, std::size_t col) const {
    return row == col ? sigma_a2_ + sigma_r2_ : sigma_a2_;
  }

 private:
  double sigma_a2_;
  double sigma_r2_;
  std::size_t n_;
};

// Dense symmetric matrix, row-major, full storage. Only set() writes, and it
// writes both triangles.
class DenseSymMatrix {
 public:
  explicit DenseSymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseSymMatrix identity(std::size_t n);
  static DenseSymMatrix from_cov(const CovX& cov);

  std::size_t n() const { return n_; }
  double operator()(std::size_t row, std::size_t col) const {
    return data_[row * n_ + col];
  }
  void set(std::size_t row, std::size_t col, double value) {
    data_[row * n_ + col] = value;
    data_[col * n_ + row] = value;
  }

  std::vector<double> apply(std::span<const double> v) const;
  // General (not necessarily symmetric) product, row-major n*n.
  std::vector<double> multiply(const DenseSymMatrix& other) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Solves cov * w = v without forming the matrix. v is split into its mean
// component (eigenvalue sigma_r^2 + n sigma_a^2) and the zero-mean remainder
// (eigenvalue sigma_r^2); this is the rank-one downdate written in a form
// that does not cancel when sigma_a >> sigma_r.
std::vector<double> covx_inv_apply(const CovX& cov, std::span<const double> v);

struct QuadForms {
  double b;  // 1^T inv(cov) 1
  double c;  // 1^T inv(cov) x
  double d;  // 1^T inv(cov) delta
  double e;  // delta^T inv(cov) x
  double f;  // delta^T inv(cov) delta
};

// Throws std::invalid_argument on dimension mismatch.
QuadForms quad_forms(const CovX& cov, std::span<const double> delta,
                     std::span<const double> x);

// B F - D^2 evaluated from centered sums:
//   n * sum((delta - mean)^2) / (sigma_r^2 (sigma_r^2 + n sigma_a^2)).
// Zero exactly when delta is constant.
double information_determinant(const CovX& cov, std::span<const double> delta);

// Population variance with a centered two-pass sum.
double population_variance(std::span<const double> v);

// sum((a - mean(a)) * (b - mean(b))), two-pass.
double centered_cross(std::span<const double> a, std::span<const double> b);

// mean(x - slope * delta), each term formed with one rounding.
double mean_intercept(std::span<const double> x, std::span<const double> delta,
                      double slope);

// Least-squares line x = intercept + slope * delta from centred sums, plus one
// refinement pass on the fma residuals. slope_lo is what is lost when the
// refined slope is rounded to a double; intercept already accounts for it.
struct LineFit {
  double slope = 0.0;
  double slope_lo = 0.0;
  double intercept = 0.0;
};
// Throws std::invalid_argument on size mismatch or constant delta.
LineFit fit_line(std::span<const double> delta, std::span<const double> x);

// Cholesky-based inverse. Test oracle for the structured paths; O(n^3).
DenseSymMatrix generic_spd_inverse(const DenseSymMatrix& m);

// Covariance of the pairwise drift estimates
//   (t_{n+1} - t_1) / d_n,  d_n = delta_{n+1} - delta_1,
// which is sigma_r^2 (u u^T + diag(u^2)) with u_n = 1 / d_n.
DenseSymMatrix alpha1_cov(std::span<const double> d, double sigma_r);

}  // namespace twsync
