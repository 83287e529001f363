#include "treecluster/gate_physics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace treecluster {

namespace {

constexpr double kPi = 3.14159265358979323846;

// adaptive composite Simpson: double the panel count until the refinement
// changes the total by less than the tolerance (relative, with an absolute
// floor for integrals that cancel to ~0)
template <typename F>
double simpson_adaptive(const F& f, double a, double b, double rel_tol,
                        double abs_tol = 1e-13) {
  int n = 64;
  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  double prev = composite(n);
  for (int it = 0; it < 16; ++it) {
    n *= 2;
    const double cur = composite(n);
    if (std::abs(cur - prev) <= std::max(rel_tol * std::abs(cur), abs_tol))
      return cur;
    prev = cur;
  }
  throw std::runtime_error("quadrature did not converge");
}

}  // namespace

double gaussian_profile(double gamma_B, double t) {
  if (gamma_B <= 0.0) throw std::invalid_argument("gaussian_profile: gamma_B");
  return std::sqrt(gamma_B / std::sqrt(kPi)) *
         std::exp(-0.5 * gamma_B * gamma_B * t * t);
}

std::complex<double> transmission(double omega, double gamma_R) {
  if (gamma_R <= 0.0) throw std::invalid_argument("transmission: gamma_R");
  const std::complex<double> half(0.0, 0.5 * gamma_R);
  return (omega - half) / (omega + half);
}

double scattering_overlap(double ratio, double xmax, double tol) {
  if (ratio <= 0.0 || ratio >= 1.0)
    throw std::invalid_argument("scattering_overlap: ratio must be in (0,1)");
  const double a = 1.0 / (2.0 * ratio);  // gamma_R / (2 gamma_B) in x units
  // c + 1 = (4/sqrt(pi)) int_0^inf exp(-x^2) x^2/(x^2+a^2) dx, a positive
  // integrand, so the near-cancellation of c against -1 never enters the
  // quadrature
  auto f = [a](double x) {
    return std::exp(-x * x) * x * x / (x * x + a * a);
  };
  const double c1 =
      4.0 / std::sqrt(kPi) * simpson_adaptive(f, 0.0, xmax, tol);
  return c1 - 1.0;
}

std::complex<double> scattering_overlap_time(double ratio) {
  // g11(t) by omega-quadrature per time sample, then the f* g11 integral.
  // x = omega/gamma_B, tau = gamma_B t.
  const double a2 = 1.0 / (2.0 * ratio);
  auto g11 = [&](double tau) {
    auto fre = [&](double x) {
      const auto t = transmission(x, 2.0 * a2);
      const std::complex<double> ph(std::cos(x * tau), std::sin(x * tau));
      return (t * ph * std::exp(-0.5 * x * x)).real();
    };
    auto fim = [&](double x) {
      const auto t = transmission(x, 2.0 * a2);
      const std::complex<double> ph(std::cos(x * tau), std::sin(x * tau));
      return (t * ph * std::exp(-0.5 * x * x)).imag();
    };
    const double re = simpson_adaptive(fre, -8.0, 8.0, 1e-10);
    const double im = simpson_adaptive(fim, -8.0, 8.0, 1e-10);
    return std::complex<double>(re, im) / std::sqrt(2.0 * kPi) *
           std::pow(kPi, -0.25);
  };
  // c = int f*(t) g11(t) dt, f(tau) = pi^{-1/4} exp(-tau^2/2)
  const int n = 4000;
  const double lo = -8.0, hi = 8.0, h = (hi - lo) / n;
  std::complex<double> acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double tau = lo + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(kPi, -0.25) * std::exp(-0.5 * tau * tau) * g11(tau);
  }
  return acc * h / 3.0;
}

double eps_cz_numeric(double ratio, double xmax, double tol) {
  const double c = scattering_overlap(ratio, xmax, tol);
  // 1 - ((3-c)/4)^2 factored to avoid cancellation: (1+c)(7-c)/16
  return (1.0 + c) * (7.0 - c) / 16.0;
}

double eps_cz_closed(double ratio) { return 2.0 * ratio * ratio; }

double eps_overlap(double gb_tph) {
  if (gb_tph <= 0.0) throw std::invalid_argument("eps_overlap: gb_tph");
  return 0.5 * std::erfc(0.5 * gb_tph);
}

double eps_overlap_quadrature(double gb_tph) {
  if (gb_tph <= 0.0) throw std::invalid_argument("eps_overlap_quadrature");
  // tail integral of |f|^2 from t_ph/2, in u = gamma_B t units
  const double lo = 0.5 * gb_tph;
  const double hi = lo + 12.0;
  auto f = [](double u) { return std::exp(-u * u) / std::sqrt(kPi); };
  return simpson_adaptive(f, lo, hi, 1e-12);
}

CooperativityModel CooperativityModel::inverse_c(double coefficient) {
  CooperativityModel m;
  m.name = "a/C (a=" + std::to_string(coefficient) + ")";
  m.loss = [coefficient](double c) { return coefficient / c; };
  return m;
}

double cooperativity_threshold(double p_int, const CooperativityModel& model) {
  if (p_int <= 0.0 || p_int >= 1.0)
    throw std::invalid_argument("cooperativity_threshold: p_int in (0,1)");
  double lo = 1e-9, hi = 1.0;
  while (model.loss(hi) > p_int) {
    hi *= 2.0;
    if (hi > 1e18)
      throw std::runtime_error("cooperativity model not invertible on range");
  }
  if (model.loss(lo) <= p_int) return lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model.loss(mid) <= p_int ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace treecluster
