#pragma once

#include "gflt/blockmat.hh"

#include <vector>

// Operator-valued frames on a finite index set: a family (T_k)_{k in X} of
// n-by-n operators with A ||f||^2 <= sum_k ||T_k f||^2 <= B ||f||^2 for some
// 0 < A <= B. Analysis maps f to (T_k f)_k, synthesis sums T_k^* g_k, the
// frame operator is S = sum_k T_k^* T_k and the Gram matrix has operator
// blocks T_k T_l^*.

namespace gflt {

class GFrame {
 public:
  GFrame() = default;
  GFrame(IndexSet index_set, std::vector<ComplexMatrix> operators);

  const IndexSet& index_set() const { return index_set_; }
  Eigen::Index count() const { return index_set_.size(); }
  Eigen::Index n() const { return n_; }
  const ComplexMatrix& op(Eigen::Index k) const { return operators_[k]; }

 private:
  IndexSet index_set_;
  std::vector<ComplexMatrix> operators_;
  Eigen::Index n_ = 0;
};

struct FrameBounds {
  double lower = 0.0;  // A: smallest eigenvalue of S, clamped at 0
  double upper = 0.0;  // B: largest eigenvalue of S
  bool is_frame = false;
};

struct DualPairCheck {
  bool ok = false;
  double residual = 0.0;
};

struct GramFactorizationReport {
  double residual_dual_gram = 0.0;  // ||G_dual - pinv(G)|| / ||pinv(G)||
  double residual_mixed = 0.0;      // ||G_mixed - G pinv(G)|| / ||G pinv(G)||
  double projection_defect = 0.0;   // max(||P^2 - P||, ||P - P^*||), P = G pinv(G)
};

BlockVector analysis(const GFrame& T, const ComplexVector& f);
ComplexVector synthesis(const GFrame& T, const BlockVector& g);
ComplexMatrix frame_operator(const GFrame& T);

BlockMatrix gram(const GFrame& T);
// blocks U_k T_l^*
BlockMatrix mixed_gram(const GFrame& U, const GFrame& T);

FrameBounds frame_bounds(const GFrame& T);

// dual frame T_k S^{-p} for p = 1 (canonical dual) or 2; the eigendecomposition
// of S is computed once and reused for the inverse power
GFrame scaled_dual(const GFrame& T, int inverse_power);
GFrame canonical_dual(const GFrame& T);

DualPairCheck is_dual_pair(const GFrame& T, const GFrame& Td, double tol);

ComplexVector reconstruct(const GFrame& T, const GFrame& Td, const ComplexVector& f);
// cumulative partial sums of sum_k T_k^* Td_k f over the given enumeration
std::vector<ComplexVector> reconstruct_partials(const GFrame& T, const GFrame& Td,
                                                const ComplexVector& f,
                                                const std::vector<Eigen::Index>& order);
// default enumeration: increasing distance from the index-set centroid
std::vector<Eigen::Index> centroid_order(const IndexSet& X);

GramFactorizationReport verify_gram_factorization(const GFrame& T);

// spectral norm of the flattened Gram matrix; an upper bound for B
double bessel_bound_from_gram(const GFrame& T);

}  // namespace gflt
