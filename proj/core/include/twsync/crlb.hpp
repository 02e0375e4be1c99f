#pragma once

#include <span>
#include <stdexcept>

#include "twsync/clock_model.hpp"

namespace twsync {

// Raised when the Fisher information for (alpha, tau) is singular, which
// happens exactly when every reply delay is the same.
class SingularInformation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Fisher information of the TOR vector with respect to (alpha, tau):
//   f_aa = 4 tau^2 B + 4 tau D + F,  f_tt = 4 alpha^2 B,
//   f_at = f_ta = 2 alpha (2 tau B + D).
struct Fim2 {
  double aa;
  double at;
  double tt;

  double determinant() const { return aa * tt - at * at; }
};

struct CrlbReport {
  double c_alpha;  // dimensionless^2
  double c_tau;    // s^2
  Fim2 fim;
};

// Throws SingularCovariance when sigma_r = 0.
Fim2 fim(double alpha, double tau, std::span<const double> delta,
         const NoiseModel& noise);

// c_alpha = B / (BF - D^2),
// c_tau   = (4 tau^2 B + 4 tau D + F) / (4 alpha^2 (BF - D^2)).
// BF - D^2 is taken from centered sums (information_determinant), so the
// bound stays accurate when mean(delta) >> spread(delta).
// Throws SingularInformation for constant delta and SingularCovariance when
// sigma_r = 0.
CrlbReport crlb_alpha_tau(double alpha, double tau,
                          std::span<const double> delta,
                          const NoiseModel& noise);

// TOA variance bound 1 / (snr * beta^2). snr is a linear power ratio; beta is
// the effective bandwidth with the 2*pi factor already folded in.
// Throws std::invalid_argument unless both are > 0.
double toa_crlb(double snr, double beta);

}  // namespace twsync
