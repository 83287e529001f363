#pragma once

#include <complex>
#include <functional>
#include <string>

namespace treecluster {

struct WavepacketParams {
  double gamma_B = 0.0;  // emitted-photon bandwidth
  double gamma_R = 0.0;  // CZ-gate bandwidth (waveguide-modified linewidth)
  double t_ph = 0.0;     // time-bin duration
};

/// Gaussian temporal profile f(t) = sqrt(gamma_B/sqrt(pi)) exp(-gamma_B^2 t^2/2),
/// normalized so that the integral of |f|^2 is one.
double gaussian_profile(double gamma_B, double t);

/// Single-photon transmission coefficient t(w) = (w - i g/2)/(w + i g/2);
/// unit modulus for real w, -1 on resonance.
std::complex<double> transmission(double omega, double gamma_R);

/// Overlap c = integral |f~(w)|^2 t(w) dw of the photon spectrum with the
/// scattering response, evaluated spectrally. Real by symmetry. xmax is the
/// integration half-range in units of gamma_B.
double scattering_overlap(double ratio, double xmax = 8.0, double tol = 1e-12);
/// Same overlap evaluated in the time domain (f* g_11 integral); used as an
/// independent numerical route.
std::complex<double> scattering_overlap_time(double ratio);

/// CZ infidelity for a Gaussian wavepacket of bandwidth ratio
/// gamma_B/gamma_R: 1 - |(3 - c)/4|^2, by adaptive quadrature.
double eps_cz_numeric(double ratio, double xmax = 8.0, double tol = 1e-12);
/// Leading-order closed form 2 (gamma_B/gamma_R)^2.
double eps_cz_closed(double ratio);

/// Time-bin overlap error [1 - erf(gamma_B t_ph / 2)] / 2.
double eps_overlap(double gb_tph);
/// The same quantity by direct quadrature of the |f|^2 tail.
double eps_overlap_quadrature(double gb_tph);

/// Internal-loss-vs-cooperativity model. The functional family is not
/// pinned by theory here; the default is the 1/C family calibrated so that
/// an internal loss budget of 0.01 requires C = 500.
struct CooperativityModel {
  std::string name;
  std::function<double(double)> loss;  // internal loss as a function of C
  static CooperativityModel inverse_c(double coefficient = 5.0);
};

/// Smallest cooperativity whose model loss does not exceed the budget.
double cooperativity_threshold(double p_int,
                               const CooperativityModel& model =
                                   CooperativityModel::inverse_c());

}  // namespace treecluster
