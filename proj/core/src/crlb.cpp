#include "twsync/crlb.hpp"

#include <cmath>
#include <vector>

#include "twsync/numerics.hpp"

namespace twsync {
namespace {

QuadForms delay_forms(const CovX& cov, std::span<const double> delta) {
  const std::vector<double> zeros(delta.size(), 0.0);
  return quad_forms(cov, delta, zeros);
}

Fim2 fim_from_forms(const QuadForms& q, double alpha, double tau) {
  return {4.0 * tau * tau * q.b + 4.0 * tau * q.d + q.f,
          2.0 * alpha * (2.0 * tau * q.b + q.d),
          4.0 * alpha * alpha * q.b};
}

}  // namespace

Fim2 fim(double alpha, double tau, std::span<const double> delta,
         const NoiseModel& noise) {
  const CovX cov(noise.sigma_a2(), noise.sigma_r2(), delta.size());
  return fim_from_forms(delay_forms(cov, delta), alpha, tau);
}

CrlbReport crlb_alpha_tau(double alpha, double tau,
                          std::span<const double> delta,
                          const NoiseModel& noise) {
  const CovX cov(noise.sigma_a2(), noise.sigma_r2(), delta.size());
  const double det = information_determinant(cov, delta);
  if (!(det > 0.0)) {
    throw SingularInformation(
        "Fisher information is singular: reply delays are all equal");
  }
  const QuadForms q = delay_forms(cov, delta);

  CrlbReport report{};
  report.fim = fim_from_forms(q, alpha, tau);
  // B/det with the sigma_A terms cancelled: sigma_R^2 / sum (delta - mean)^2.
  report.c_alpha = noise.sigma_r2() /
                   (static_cast<double>(delta.size()) * population_variance(delta));
  report.c_tau = report.fim.aa / (4.0 * alpha * alpha * det);
  return report;
}

double toa_crlb(double snr, double beta) {
  if (!(snr > 0.0) || !(beta > 0.0) || !std::isfinite(snr) ||
      !std::isfinite(beta)) {
    throw std::invalid_argument("toa_crlb needs snr > 0 and beta > 0");
  }
  return 1.0 / (snr * beta * beta);
}

}  // namespace twsync
