#include "gflt/gframe.hh"

#include "gflt/util.hh"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gflt {

GFrame::GFrame(IndexSet index_set, std::vector<ComplexMatrix> operators)
    : index_set_(std::move(index_set)), operators_(std::move(operators)) {
  if (static_cast<Eigen::Index>(operators_.size()) != index_set_.size())
    throw std::invalid_argument("GFrame: one operator required per index point");
  if (operators_.empty()) throw std::invalid_argument("GFrame: empty family");
  n_ = operators_[0].rows();
  for (const ComplexMatrix& T : operators_) {
    if (T.rows() != n_ || T.cols() != n_)
      throw std::invalid_argument("GFrame: operators must all be n x n");
    require_finite(T, "GFrame");
  }
}

BlockVector analysis(const GFrame& T, const ComplexVector& f) {
  if (f.size() != T.n()) throw std::invalid_argument("analysis: vector dimension mismatch");
  BlockVector out(T.index_set(), T.n());
  for (Eigen::Index k = 0; k < T.count(); ++k) out.component(k) = T.op(k) * f;
  return out;
}

ComplexVector synthesis(const GFrame& T, const BlockVector& g) {
  if (!T.index_set().same_as(g.index_set()) || T.n() != g.n())
    throw std::invalid_argument("synthesis: operand index sets or dimensions differ");
  std::vector<ComplexVector> terms(T.count());
  for (Eigen::Index k = 0; k < T.count(); ++k) terms[k] = T.op(k).adjoint() * g.component(k);
  return pairwise_sum(terms);
}

ComplexMatrix frame_operator(const GFrame& T) {
  std::vector<ComplexMatrix> terms(T.count());
  for (Eigen::Index k = 0; k < T.count(); ++k) terms[k] = T.op(k).adjoint() * T.op(k);
  return pairwise_sum(terms);
}

BlockMatrix mixed_gram(const GFrame& U, const GFrame& T) {
  if (!U.index_set().same_as(T.index_set()) || U.n() != T.n())
    throw std::invalid_argument("mixed_gram: frames live on different index sets");
  BlockMatrix G(T.index_set(), T.n());
  for (Eigen::Index k = 0; k < T.count(); ++k)
    for (Eigen::Index l = 0; l < T.count(); ++l) G.block(k, l) = U.op(k) * T.op(l).adjoint();
  return G;
}

BlockMatrix gram(const GFrame& T) { return mixed_gram(T, T); }

FrameBounds frame_bounds(const GFrame& T) {
  const HermitianEig e = hermitian_eig(frame_operator(T));
  FrameBounds b;
  b.upper = e.eigenvalues[e.eigenvalues.size() - 1];
  // S is a sum of Hermitian squares; tiny negative eigenvalues are rounding
  b.lower = std::max(0.0, e.eigenvalues[0]);
  b.is_frame = b.lower > 1e-10 * b.upper;
  return b;
}

GFrame scaled_dual(const GFrame& T, int inverse_power) {
  const ComplexMatrix S = frame_operator(T);
  const HermitianEig e = hermitian_eig(S);
  const double top = e.eigenvalues[e.eigenvalues.size() - 1];
  if (!(e.eigenvalues[0] > 1e-10 * top))
    throw std::invalid_argument("scaled_dual: not a frame (lower bound below tolerance)");
  const ComplexMatrix Sinv = matrix_power_from_eig(e, -static_cast<double>(inverse_power));
  std::vector<ComplexMatrix> ops(T.count());
  for (Eigen::Index k = 0; k < T.count(); ++k) ops[k] = T.op(k) * Sinv;
  return GFrame(T.index_set(), std::move(ops));
}

GFrame canonical_dual(const GFrame& T) { return scaled_dual(T, 1); }

DualPairCheck is_dual_pair(const GFrame& T, const GFrame& Td, double tol) {
  if (!T.index_set().same_as(Td.index_set()) || T.n() != Td.n())
    throw std::invalid_argument("is_dual_pair: frames live on different index sets");
  std::vector<ComplexMatrix> ab(T.count()), ba(T.count());
  for (Eigen::Index k = 0; k < T.count(); ++k) {
    ab[k] = T.op(k).adjoint() * Td.op(k);
    ba[k] = Td.op(k).adjoint() * T.op(k);
  }
  const ComplexMatrix I = ComplexMatrix::Identity(T.n(), T.n());
  const double r =
      std::max(spectral_norm(pairwise_sum(ab) - I), spectral_norm(pairwise_sum(ba) - I));
  return {r <= tol, r};
}

ComplexVector reconstruct(const GFrame& T, const GFrame& Td, const ComplexVector& f) {
  if (!T.index_set().same_as(Td.index_set()) || T.n() != Td.n())
    throw std::invalid_argument("reconstruct: frames live on different index sets");
  if (f.size() != T.n()) throw std::invalid_argument("reconstruct: vector dimension mismatch");
  std::vector<ComplexVector> terms(T.count());
  for (Eigen::Index k = 0; k < T.count(); ++k)
    terms[k] = T.op(k).adjoint() * (Td.op(k) * f);
  return pairwise_sum(terms);
}

std::vector<ComplexVector> reconstruct_partials(const GFrame& T, const GFrame& Td,
                                                const ComplexVector& f,
                                                const std::vector<Eigen::Index>& order) {
  if (!T.index_set().same_as(Td.index_set()) || T.n() != Td.n())
    throw std::invalid_argument("reconstruct_partials: frames live on different index sets");
  if (f.size() != T.n())
    throw std::invalid_argument("reconstruct_partials: vector dimension mismatch");
  if (static_cast<Eigen::Index>(order.size()) != T.count())
    throw std::invalid_argument("reconstruct_partials: enumeration must cover the index set");
  std::vector<ComplexVector> partials;
  partials.reserve(order.size());
  ComplexVector acc = ComplexVector::Zero(T.n());
  for (const Eigen::Index k : order) {
    if (k < 0 || k >= T.count())
      throw std::invalid_argument("reconstruct_partials: enumeration index out of range");
    acc += T.op(k).adjoint() * (Td.op(k) * f);
    partials.push_back(acc);
  }
  return partials;
}

std::vector<Eigen::Index> centroid_order(const IndexSet& X) {
  const Eigen::VectorXd centroid = X.points().colwise().mean();
  std::vector<Eigen::Index> order(X.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> dist(X.size());
  for (Eigen::Index k = 0; k < X.size(); ++k)
    dist[k] = X.displacement_norm(X.points().row(k).transpose() - centroid);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return dist[a] < dist[b]; });
  return order;
}

GramFactorizationReport verify_gram_factorization(const GFrame& T) {
  const GFrame Td = canonical_dual(T);  // throws if not a frame

  const ComplexMatrix G = flatten(gram(T));
  const ComplexMatrix Gd = flatten(gram(Td));
  const ComplexMatrix Gmix = flatten(mixed_gram(T, Td));
  const ComplexMatrix Gp = pinv(G);

  GramFactorizationReport rep;
  const double gp_norm = spectral_norm(Gp);
  rep.residual_dual_gram = spectral_norm(Gd - Gp) / gp_norm;

  const ComplexMatrix P = G * Gp;
  const double p_norm = spectral_norm(P);
  rep.residual_mixed = spectral_norm(Gmix - P) / p_norm;
  rep.projection_defect =
      std::max(spectral_norm(P * P - P), spectral_norm(P - P.adjoint()));
  return rep;
}

double bessel_bound_from_gram(const GFrame& T) { return spectral_norm(flatten(gram(T))); }

}  // namespace gflt
