#pragma once

#include "gflt/localization.hh"

#include <optional>
#include <utility>
#include <vector>

// Discrete periodic time-frequency calculus on C^L: cyclic translation and
// modulation, time-frequency shifts pi(z) = M_w T_x, the short-time Fourier
// transform, periodized Gaussian windows, window operators given as sums of
// rank-one terms, their conjugation by pi(z), and the resulting Gabor
// g-systems with their localization diagnostics.

namespace gflt {

// time-frequency lattice point (x = time shift, w = frequency shift), both
// taken mod L by the operations
struct TFPoint {
  Eigen::Index x = 0;
  Eigen::Index w = 0;
};

// window operator T = sum_n phi_n (x) psi_n acting as f -> sum_n <f, psi_n> phi_n
struct WindowOperator {
  std::vector<std::pair<ComplexVector, ComplexVector>> terms;
};

struct GaborGSystem {
  WindowOperator window;
  std::vector<TFPoint> points;
  Eigen::Index L = 0;
};

struct DecayTheoremReport {
  double s = 0.0;
  // Jaffard norms of the Gram matrix, the mixed Gram against the canonical
  // dual, and the dual Gram
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  std::optional<DecayFit> fit_primal;
  std::optional<DecayFit> fit_mixed;
  std::optional<DecayFit> fit_dual;
  double decay_slack = 0.5;
  // dual fitted exponent >= primal fitted exponent - decay_slack (true when
  // either fit is unavailable)
  bool dual_exponent_ok = true;
  FrameBounds bounds;
  // density statistic: every finite set is relatively separated, so only the
  // maximum number of points in a unit toroidal ball is recorded for context
  Eigen::Index max_points_per_unit_ball = 0;
};

// cyclic shift (T_x f)(t) = f((t - x) mod L)
ComplexVector translate(const ComplexVector& f, Eigen::Index x);
// (M_w f)(t) = exp(2 pi i w t / L) f(t)
ComplexVector modulate(const ComplexVector& f, Eigen::Index w);
// pi(z) = M_w T_x
ComplexVector tf_shift(const ComplexVector& f, TFPoint z);

// V_g f(x, w) = <f, pi((x,w)) g> for all L^2 points, returned as the L-by-L
// matrix V(x, w); column-wise discrete Fourier transforms of f * conj(T_x g)
ComplexMatrix stft(const ComplexVector& f, const ComplexVector& g);

// periodized Gaussian exp(-pi t^2 / L) sampled at integer offsets centred at
// 0, wrapped over 3 periods and normalized to unit norm; the 1/L width keeps
// the window balanced between time and frequency so its spectrogram decays
// in both lattice directions
ComplexVector discrete_gaussian(Eigen::Index L);

// discrete proxy for the weighted spectrogram integral:
// sum_z |V_{g0} f(z)| (1 + d_tor(z, 0))^s
double m1_norm_proxy(const ComplexVector& f, double s);

// alpha_z(T) = pi(z) T pi(z)^*, applied termwise to the rank-one sum
WindowOperator op_translate(const WindowOperator& T, TFPoint z);

// dense matrix sum_n phi_n psi_n^*
ComplexMatrix assemble(const WindowOperator& T);
// sum_n ||phi_n|| ||psi_n|| (finite by construction, recorded for reports)
double rank_one_mass(const WindowOperator& T);

// GFrame with operators alpha_k(window) over the toroidal index set of the
// system's time-frequency points
GFrame build_gabor_gsystem(const GaborGSystem& sys);

// ||alpha_k(T) alpha_l(T)^*|| = ||phi||^2 |<pi(l)psi, pi(k)psi>| for a
// single-term window T = phi (x) psi
double rank_one_gram_block_closed_form(const WindowOperator& window, TFPoint k, TFPoint l,
                                       Eigen::Index L);

Eigen::Index max_points_per_unit_ball(const std::vector<TFPoint>& points, Eigen::Index L);

// Jaffard norms and decay fits of the three Gram matrices (primal, mixed
// against the canonical dual, dual); single-term windows use the rank-one
// closed form so no operator blocks are materialized
DecayTheoremReport verify_decay_theorem(const GaborGSystem& sys, double s,
                                        double decay_slack = 0.5);

}  // namespace gflt
