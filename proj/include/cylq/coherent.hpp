#pragma once

// Coherent states |q,p;k> on the circle: WBZ fibers of Weyl-Heisenberg
// Gaussians, their theta-function closed form, resolution of unity and the
// semiclassical sweep.

#include <functional>
#include <vector>

#include "cylq/cylinder.hpp"

namespace cylq {

struct CoherentStateParams {
  double q = 0.0;
  double p = 0.0;
  double omega = 1.0;
  FiberParams fp;

  CoherentStateParams() = default;
  /// Throws std::invalid_argument unless omega > 0 and q, p are finite.
  CoherentStateParams(double q_, double p_, double omega_, const FiberParams& fp_);

  /// a^2 omega / (2 hbar); rho_1 = exp(-A).
  double decay() const { return fp.a * fp.a * omega / (2.0 * fp.hbar); }
  double rho1() const { return std::exp(-decay()); }
};

/// Decay above which cs_wavefunction switches from the theta form to the translate sum.
inline constexpr double kThetaRouteMaxDecay = 500.0;

/// eta_{q,p}(x) = e^{i p (x - q/2) / hbar} (omega / pi hbar)^{1/4} e^{-omega (x - q)^2 / 2 hbar}.
cplx weyl_heisenberg_state(const CoherentStateParams& csp, double x);

/// Closed theta form, re-centred on the dominant translate of each sample.
CVector cs_wavefunction_theta(const CoherentStateParams& csp, const CircleGrid& grid);
/// Direct translate sum sum_n e^{inak} eta_{q,p}(q' - n a).
CVector cs_wavefunction_sum(const CoherentStateParams& csp, const CircleGrid& grid);
/// Theta form when decay() <= kThetaRouteMaxDecay, translate sum otherwise.
CVector cs_wavefunction(const CoherentStateParams& csp, const CircleGrid& grid);

/// <m;k|q,p;k> = a^{-1/2} (omega/pi hbar)^{1/4} (2 pi hbar/omega)^{1/2}
/// e^{i(p/2 - u_m) q / hbar} e^{-(u_m - p)^2 / 2 omega hbar}, u_m = (2 pi m / a + k) hbar.
CVector cs_coefficients(const CoherentStateParams& csp, int N);

struct ResolutionReport {
  CMatrix matrix;
  double deviation = 0.0;  // max |matrix - I|
};

/// (1/2 pi hbar) int_0^a dq int_{-p_cutoff}^{p_cutoff} dp |q,p;k><q,p;k| in the band-N basis.
ResolutionReport resolution_of_unity(const FiberParams& fp, double omega, int N, double p_cutoff, int q_steps,
                                     int p_steps);

struct TranslatedState {
  CoherentStateParams params;
  cplx phase;
};

/// U(x,n)|q,p;k> = e^{i pi n q / a} e^{i p x / 2 hbar} |q - x, p + 2 pi hbar n / a; k>.
TranslatedState cs_translation(double x, int n, const CoherentStateParams& csp);

/// |(1/2 pi hbar) int dq' dp' |<q',p';k|q,p;k>|^2 b(q',p') - b(q,p)| over q' in [0,a),
/// |p' - p| <= p_halfwidth.
double overlap_concentration_error(const CoherentStateParams& csp, const PhaseSpaceFunction& bump, int N,
                                   int q_steps, int p_steps, double p_halfwidth);

/// Smallest band holding the coefficients of csp above 1e-20 and a margin for an observable of band B.
int coherent_band(const CoherentStateParams& csp, int observable_band);

struct SweepRow {
  double hbar = 0.0;
  int band = 0;
  double norm = 0.0;  // <q,p|q,p>
  cplx f;             // <f^>
  cplx shift;         // <E>
  cplx momentum;      // <P^(k)>
  cplx bracket;       // (1/i hbar) <[f^, g^]>
  double norm_error = 0.0;
  double f_error = 0.0;
  double shift_error = 0.0;
  double momentum_error = 0.0;
  double bracket_error = 0.0;
};

/// Expectations are divided by <q,p|q,p>. state.fp.hbar is replaced by each sequence value.
std::vector<SweepRow> semiclassical_sweep(const ModeFunction& f, const ModeFunction& g,
                                          const CoherentStateParams& state, const std::vector<double>& hbars);

struct MonotoneReport {
  bool norm = true;
  bool f = true;
  bool shift = true;
  bool momentum = true;
  bool bracket = true;
  bool all() const { return norm && f && shift && momentum && bracket; }
};

/// Strict decrease of each error column along the rows.
MonotoneReport sweep_monotone(const std::vector<SweepRow>& rows);

}  // namespace cylq
