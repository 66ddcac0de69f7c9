#include <algorithm>
#include <cmath>
#include <numbers>

#include "ccurv/ccurv.hpp"
#include "ccurv/error.hpp"
#include "ccurv/kernels.hpp"

namespace ccurv {

HMuValues h_mu_functions(double tau) {
  if (!(tau > 0.0 && tau < std::numbers::pi))
    throw ConfigError("h_mu_functions: tau must lie in (0, pi)");
  using kernels::Integrand;
  HMuValues v;
  v.h1 = kernels::evaluate(Integrand::h1, tau);
  v.h2 = kernels::evaluate(Integrand::h2, tau);
  v.mu1 = std::min({kernels::evaluate(Integrand::mu1_first, tau),
                    kernels::evaluate(Integrand::mu1_second, tau),
                    kernels::evaluate(Integrand::mu1_third, tau)});
  return v;
}

SphereSplit sphere_split(double rbar0, double theta, double phi) {
  if (!(rbar0 > 0.0 && rbar0 < std::numbers::pi))
    throw ConfigError("sphere_split: rbar0 must lie in (0, pi)");
  using kernels::Integrand;
  const double r = rbar0, s = std::sin(r);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double gap = r * r - s * s;
  const double sq = st * cp * std::sqrt(gap / (r * s * s * s)) - ct * sp * std::sqrt(gap / (r * r * r * s));
  SphereSplit out;
  out.s1 = 2.0 * sq * sq;
  out.s2 = st * st * sp * sp * kernels::evaluate(Integrand::mu1_first, r) +
           st * st * cp * cp * kernels::evaluate(Integrand::mu1_second, r) +
           ct * ct * sp * sp * kernels::evaluate(Integrand::mu1_third, r);
  out.closed_form = c_curvature_sphere(1.0, r, theta, phi);
  out.mu1_minorant = h_mu_functions(r).mu1 * (st * st + ct * ct * sp * sp);
  return out;
}

}  // namespace ccurv
