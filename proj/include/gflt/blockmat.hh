#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

// Dense complex linear algebra plus the operator-block matrix calculus used
// everywhere else: a finite index set X, matrices indexed by pairs of points
// of X whose entries are n-by-n operator blocks, and the flatten/unflatten
// identification of ell^2(X; C^n) with C^{|X| n}.

namespace gflt {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// relative residual allowed for factorizations (SVD reconstruction, eig residual)
inline constexpr double tol_svd = 1e-12;
// relative Hermitian-symmetry gate
inline constexpr double tol_herm = 1e-10;

// default pseudo-inverse truncation threshold, relative to sigma_max
double default_pinv_rtol(Eigen::Index rows, Eigen::Index cols);

struct SvdFactorization {
  ComplexMatrix left_vectors;   // unitary columns, rows x r
  RealVector singular_values;   // nonincreasing, all >= 0
  ComplexMatrix right_vectors;  // unitary columns, cols x r
};

struct HermitianEig {
  RealVector eigenvalues;      // nondecreasing
  ComplexMatrix eigenvectors;  // orthonormal columns
};

// Finite set of index points in R^m with either the plain Euclidean metric or
// the toroidal one (coordinatewise minimum over period translates).
class IndexSet {
 public:
  enum class Metric { euclidean, toroidal };

  IndexSet() = default;
  // points: one row per index point. For toroidal mode every coordinate must
  // lie in [0, period).
  IndexSet(RealMatrix points, Metric metric = Metric::euclidean, double period = 0.0);

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  Metric metric() const { return metric_; }
  double period() const { return period_; }
  const RealMatrix& points() const { return points_; }
  Eigen::VectorXd point(Eigen::Index k) const { return points_.row(k); }

  double distance(Eigen::Index k, Eigen::Index l) const;
  // distance of the difference vector d to the origin under this metric
  double displacement_norm(const Eigen::VectorXd& d) const;
  // minimal-image representative of d: unchanged for euclidean mode, each
  // coordinate reduced to (-period/2, period/2] for toroidal mode
  Eigen::VectorXd reduce(const Eigen::VectorXd& d) const;
  // reduced difference point(k) - point(l)
  Eigen::VectorXd displacement(Eigen::Index k, Eigen::Index l) const;

  bool same_as(const IndexSet& other) const;

  // 1-D lattice 0..count-1 (convenience for tests and synthetic scenarios)
  static IndexSet line(Eigen::Index count);
  // full 2-D torus grid {0,step,...}^2 inside [0,L)^2 with toroidal metric
  static IndexSet torus_grid(double L, double step);

 private:
  RealMatrix points_;
  Metric metric_ = Metric::euclidean;
  double period_ = 0.0;
};

// Dense matrix of n-by-n blocks over all ordered pairs of index points.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(IndexSet index_set, Eigen::Index n);  // zero-initialised blocks

  const IndexSet& index_set() const { return index_set_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index count() const { return index_set_.size(); }

  ComplexMatrix& block(Eigen::Index k, Eigen::Index l);
  const ComplexMatrix& block(Eigen::Index k, Eigen::Index l) const;

 private:
  IndexSet index_set_;
  Eigen::Index n_ = 0;
  std::vector<ComplexMatrix> blocks_;  // row-major over (k,l)
};

class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(IndexSet index_set, Eigen::Index n);  // zero-initialised

  const IndexSet& index_set() const { return index_set_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index count() const { return index_set_.size(); }

  ComplexVector& component(Eigen::Index k) { return components_[k]; }
  const ComplexVector& component(Eigen::Index k) const { return components_[k]; }

 private:
  IndexSet index_set_;
  Eigen::Index n_ = 0;
  std::vector<ComplexVector> components_;
};

void require_finite(const ComplexMatrix& A, const char* what);

// largest singular value
double spectral_norm(const ComplexMatrix& A);

// thin SVD with singular values sorted nonincreasing
SvdFactorization svd(const ComplexMatrix& A);

// Moore-Penrose pseudo-inverse by SVD truncation: singular values
// sigma_i > rtol * sigma_max are inverted, the rest dropped. rtol < 0 selects
// the default threshold.
ComplexMatrix pinv(const ComplexMatrix& A, double rtol = -1.0);

// the identity A^+ = A^* (A A^*)^+, evaluated literally as a cross-check route
ComplexMatrix pinv_via_formula(const ComplexMatrix& A, double rtol = -1.0);

// eigendecomposition of a Hermitian matrix; rejects inputs whose symmetry
// defect exceeds tol_herm relative to the matrix norm
HermitianEig hermitian_eig(const ComplexMatrix& A);

// V diag(lambda^p) V^* from a precomputed eigendecomposition. Negative powers
// require a strictly positive spectrum.
ComplexMatrix matrix_power_from_eig(const HermitianEig& e, double p);

BlockMatrix block_mul(const BlockMatrix& A, const BlockMatrix& B);
BlockMatrix block_adjoint(const BlockMatrix& A);
BlockVector block_apply(const BlockMatrix& A, const BlockVector& v);

ComplexMatrix flatten(const BlockMatrix& A);
ComplexVector flatten(const BlockVector& v);
BlockMatrix unflatten(const ComplexMatrix& M, const IndexSet& index_set, Eigen::Index n);
BlockVector unflatten_vector(const ComplexVector& x, const IndexSet& index_set, Eigen::Index n);

// pseudo-inverse in block form
BlockMatrix block_pinv(const BlockMatrix& A, double rtol = -1.0);

}  // namespace gflt
