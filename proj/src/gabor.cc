#include "gflt/gabor.hh"

#include "gflt/util.hh"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gflt {

namespace {

Eigen::Index mod_L(Eigen::Index t, Eigen::Index L) { return ((t % L) + L) % L; }

void require_window(const WindowOperator& T, Eigen::Index L) {
  if (T.terms.empty()) throw std::invalid_argument("window operator needs at least one term");
  for (const auto& [phi, psi] : T.terms)
    if (phi.size() != L || psi.size() != L)
      throw std::invalid_argument("window term length does not match L");
}

// toroidal distance of a lattice point to the origin
double torus_norm(TFPoint z, Eigen::Index L) {
  const double dx = double(std::min(mod_L(z.x, L), L - mod_L(z.x, L)));
  const double dw = double(std::min(mod_L(z.w, L), L - mod_L(z.w, L)));
  return std::hypot(dx, dw);
}

double torus_distance(TFPoint a, TFPoint b, Eigen::Index L) {
  return torus_norm({a.x - b.x, a.w - b.w}, L);
}

// forward DFT matrix F(w, t) = exp(-2 pi i w t / L)
ComplexMatrix dft_matrix(Eigen::Index L) {
  ComplexMatrix F(L, L);
  const double step = 2.0 * std::numbers::pi / double(L);
  for (Eigen::Index w = 0; w < L; ++w)
    for (Eigen::Index t = 0; t < L; ++t) F(w, t) = std::polar(1.0, -step * double((w * t) % L));
  return F;
}

}  // namespace

ComplexVector translate(const ComplexVector& f, Eigen::Index x) {
  const Eigen::Index L = f.size();
  ComplexVector out(L);
  for (Eigen::Index t = 0; t < L; ++t) out(t) = f(mod_L(t - x, L));
  return out;
}

ComplexVector modulate(const ComplexVector& f, Eigen::Index w) {
  const Eigen::Index L = f.size();
  const double step = 2.0 * std::numbers::pi / double(L);
  ComplexVector out(L);
  for (Eigen::Index t = 0; t < L; ++t)
    out(t) = std::polar(1.0, step * double(mod_L(w * t, L))) * f(t);
  return out;
}

ComplexVector tf_shift(const ComplexVector& f, TFPoint z) {
  return modulate(translate(f, z.x), z.w);
}

ComplexMatrix stft(const ComplexVector& f, const ComplexVector& g) {
  const Eigen::Index L = f.size();
  if (g.size() != L) throw std::invalid_argument("stft: length mismatch");
  const ComplexMatrix F = dft_matrix(L);
  ComplexMatrix V(L, L);
  for (Eigen::Index x = 0; x < L; ++x) {
    const ComplexVector h = f.cwiseProduct(translate(g, x).conjugate());
    V.row(x) = (F * h).transpose();
  }
  return V;
}

ComplexVector discrete_gaussian(Eigen::Index L) {
  if (L < 4) throw std::invalid_argument("discrete_gaussian: L must be at least 4");
  ComplexVector g(L);
  for (Eigen::Index t = 0; t < L; ++t) {
    // centred representative of t, then three wrap periods
    const double tc = (t <= L / 2) ? double(t) : double(t - L);
    double acc = 0.0;
    for (int j = -1; j <= 1; ++j) {
      const double u = tc + double(j) * double(L);
      acc += std::exp(-std::numbers::pi * u * u / double(L));
    }
    g(t) = acc;
  }
  return g / g.norm();
}

double m1_norm_proxy(const ComplexVector& f, double s) {
  const Eigen::Index L = f.size();
  const ComplexVector g0 = discrete_gaussian(L);
  const ComplexMatrix V = stft(f, g0);
  std::vector<double> terms;
  terms.reserve(size_t(L) * size_t(L));
  for (Eigen::Index x = 0; x < L; ++x)
    for (Eigen::Index w = 0; w < L; ++w)
      terms.push_back(std::abs(V(x, w)) * std::pow(1.0 + torus_norm({x, w}, L), s));
  return pairwise_sum(terms);
}

WindowOperator op_translate(const WindowOperator& T, TFPoint z) {
  WindowOperator out;
  out.terms.reserve(T.terms.size());
  for (const auto& [phi, psi] : T.terms) out.terms.push_back({tf_shift(phi, z), tf_shift(psi, z)});
  return out;
}

ComplexMatrix assemble(const WindowOperator& T) {
  if (T.terms.empty()) throw std::invalid_argument("window operator needs at least one term");
  const Eigen::Index L = T.terms.front().first.size();
  require_window(T, L);
  ComplexMatrix M = ComplexMatrix::Zero(L, L);
  for (const auto& [phi, psi] : T.terms) M += phi * psi.adjoint();
  return M;
}

double rank_one_mass(const WindowOperator& T) {
  std::vector<double> terms(T.terms.size());
  for (size_t n = 0; n < T.terms.size(); ++n)
    terms[n] = T.terms[n].first.norm() * T.terms[n].second.norm();
  return pairwise_sum(terms);
}

namespace {

IndexSet tf_index_set(const std::vector<TFPoint>& points, Eigen::Index L) {
  RealMatrix P(Eigen::Index(points.size()), 2);
  for (Eigen::Index k = 0; k < P.rows(); ++k) {
    const TFPoint& z = points[size_t(k)];
    if (z.x < 0 || z.x >= L || z.w < 0 || z.w >= L)
      throw std::invalid_argument("time-frequency point out of range [0, L)");
    P(k, 0) = double(z.x);
    P(k, 1) = double(z.w);
  }
  return IndexSet(P, IndexSet::Metric::toroidal, double(L));
}

}  // namespace

GFrame build_gabor_gsystem(const GaborGSystem& sys) {
  if (sys.L < 1) throw std::invalid_argument("gabor system: L must be positive");
  require_window(sys.window, sys.L);
  if (sys.points.empty()) throw std::invalid_argument("gabor system: no lattice points");
  const IndexSet X = tf_index_set(sys.points, sys.L);
  std::vector<ComplexMatrix> ops;
  ops.reserve(sys.points.size());
  for (const TFPoint& z : sys.points) ops.push_back(assemble(op_translate(sys.window, z)));
  return GFrame(X, std::move(ops));
}

double rank_one_gram_block_closed_form(const WindowOperator& window, TFPoint k, TFPoint l,
                                       Eigen::Index L) {
  if (window.terms.size() != 1)
    throw std::invalid_argument("closed form requires a single-term window; assemble directly");
  require_window(window, L);
  const auto& [phi, psi] = window.terms.front();
  return phi.squaredNorm() * std::abs(tf_shift(psi, k).dot(tf_shift(psi, l)));
}

Eigen::Index max_points_per_unit_ball(const std::vector<TFPoint>& points, Eigen::Index L) {
  Eigen::Index best = 0;
  for (const TFPoint& a : points) {
    Eigen::Index count = 0;
    for (const TFPoint& b : points)
      if (torus_distance(a, b, L) <= 1.0) ++count;
    best = std::max(best, count);
  }
  return best;
}

namespace {

struct ScalarGrams {
  RealMatrix primal;
  RealMatrix mixed;
  RealMatrix dual;
  FrameBounds bounds;
};

FrameBounds bounds_from_eig(const RealVector& eigenvalues) {
  FrameBounds b;
  b.lower = std::max(eigenvalues(0), 0.0);
  b.upper = eigenvalues(eigenvalues.size() - 1);
  b.is_frame = b.lower > 1e-10 * b.upper;
  return b;
}

// single-term window: every Gram block is rank one with closed-form norm
// ||phi||^2 |<M pi(l)psi, pi(k)psi>| for M in {I, S^-1, S^-2}
ScalarGrams scalar_grams_rank_one(const GaborGSystem& sys, const IndexSet& X) {
  const auto& [phi, psi] = sys.window.terms.front();
  const Eigen::Index N = X.size();
  const Eigen::Index L = sys.L;
  ComplexMatrix U(L, N);
  for (Eigen::Index k = 0; k < N; ++k) U.col(k) = tf_shift(psi, sys.points[size_t(k)]);

  const double phi2 = phi.squaredNorm();
  const ComplexMatrix S = phi2 * (U * U.adjoint());
  const HermitianEig eig = hermitian_eig(S);
  ScalarGrams out;
  out.bounds = bounds_from_eig(eig.eigenvalues);
  if (!out.bounds.is_frame)
    throw std::invalid_argument("gabor system is not a frame on this lattice");

  // S^-p U through the eigenbasis, p = 1, 2
  const ComplexMatrix W = eig.eigenvectors.adjoint() * U;
  ComplexMatrix W1 = W, W2 = W;
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    W1.row(i) /= eig.eigenvalues(i);
    W2.row(i) /= eig.eigenvalues(i) * eig.eigenvalues(i);
  }
  const ComplexMatrix SinvU = eig.eigenvectors * W1;
  const ComplexMatrix Sinv2U = eig.eigenvectors * W2;

  out.primal = phi2 * (U.adjoint() * U).cwiseAbs();
  out.mixed = phi2 * (U.adjoint() * SinvU).cwiseAbs();
  out.dual = phi2 * (U.adjoint() * Sinv2U).cwiseAbs();
  return out;
}

// general windows: assemble the operators and take block norms one pair at a
// time so the full operator-valued Gram is never stored
ScalarGrams scalar_grams_direct(const GaborGSystem& sys, const IndexSet& X) {
  const GFrame G = build_gabor_gsystem(sys);
  const Eigen::Index N = X.size();
  const HermitianEig eig = hermitian_eig(frame_operator(G));
  ScalarGrams out;
  out.bounds = bounds_from_eig(eig.eigenvalues);
  if (!out.bounds.is_frame)
    throw std::invalid_argument("gabor system is not a frame on this lattice");

  const ComplexMatrix Sinv = matrix_power_from_eig(eig, -1.0);
  const ComplexMatrix Sinv2 = matrix_power_from_eig(eig, -2.0);
  out.primal.resize(N, N);
  out.mixed.resize(N, N);
  out.dual.resize(N, N);
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) {
      const ComplexMatrix Gl = G.op(l).adjoint();
      out.primal(k, l) = spectral_norm(G.op(k) * Gl);
      out.mixed(k, l) = spectral_norm(G.op(k) * (Sinv * Gl));
      out.dual(k, l) = spectral_norm(G.op(k) * (Sinv2 * Gl));
    }
  return out;
}

std::optional<DecayFit> try_fit(const RealMatrix& norms, const IndexSet& X) {
  try {
    return fit_polynomial_decay_scalar(norms, X);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

DecayTheoremReport verify_decay_theorem(const GaborGSystem& sys, double s, double decay_slack) {
  if (sys.L < 1) throw std::invalid_argument("gabor system: L must be positive");
  require_window(sys.window, sys.L);
  const IndexSet X = tf_index_set(sys.points, sys.L);

  const ScalarGrams grams = (sys.window.terms.size() == 1) ? scalar_grams_rank_one(sys, X)
                                                           : scalar_grams_direct(sys, X);

  DecayTheoremReport report;
  report.s = s;
  report.decay_slack = decay_slack;
  report.bounds = grams.bounds;
  report.C1 = jaffard_norm_scalar(grams.primal, X, s);
  report.C2 = jaffard_norm_scalar(grams.mixed, X, s);
  report.C3 = jaffard_norm_scalar(grams.dual, X, s);
  report.fit_primal = try_fit(grams.primal, X);
  report.fit_mixed = try_fit(grams.mixed, X);
  report.fit_dual = try_fit(grams.dual, X);
  report.dual_exponent_ok =
      !(report.fit_primal && report.fit_dual) ||
      report.fit_dual->s_fit >= report.fit_primal->s_fit - decay_slack;
  report.max_points_per_unit_ball = max_points_per_unit_ball(sys.points, sys.L);
  return report;
}

}  // namespace gflt
