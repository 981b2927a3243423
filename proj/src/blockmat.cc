#include "gflt/blockmat.hh"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

// LAPACK does the heavy dense factorizations (zgesdd/zheevd); Eigen supplies
// the containers and products. Map LAPACK's complex to std::complex.
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace gflt {

namespace {

void require_nonempty(const ComplexMatrix& A, const char* what) {
  if (A.rows() == 0 || A.cols() == 0)
    throw std::invalid_argument(std::string(what) + ": empty matrix");
}

// singular values only, nonincreasing
RealVector lapack_singular_values(const ComplexMatrix& A) {
  ComplexMatrix work = A;  // zgesdd destroys its input
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  RealVector s(std::min(m, n));
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m,
                                         s.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw std::runtime_error("zgesdd failed to converge (info=" + std::to_string(info) + ")");
  return s;
}

bool hermitian_within(const ComplexMatrix& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  // Frobenius gate; within a sqrt(n) factor of the spectral-norm gate and
  // exact for the machine-Hermitian inputs this fast path is meant for.
  const double scale = A.norm();
  if (scale == 0.0) return true;
  return (A - A.adjoint()).norm() <= rel_tol * scale;
}

bool skew_hermitian_within(const ComplexMatrix& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  const double scale = A.norm();
  if (scale == 0.0) return true;
  return (A + A.adjoint()).norm() <= rel_tol * scale;
}

// eigendecomposition without the Hermitian-defect gate; uses the lower triangle
HermitianEig lapack_heig(const ComplexMatrix& A, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  HermitianEig out;
  out.eigenvalues.resize(n);
  ComplexMatrix work = A;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                                         work.data(), n, out.eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed (info=" + std::to_string(info) + ")");
  if (want_vectors) out.eigenvectors = std::move(work);
  return out;
}

}  // namespace

double default_pinv_rtol(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon() * 64.0;
}

void require_finite(const ComplexMatrix& A, const char* what) {
  if (!A.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite matrix entry");
}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(RealMatrix points, Metric metric, double period)
    : points_(std::move(points)), metric_(metric), period_(period) {
  if (metric_ == Metric::toroidal) {
    if (!(period_ > 0.0)) throw std::invalid_argument("IndexSet: toroidal period must be > 0");
    if ((points_.array() < 0.0).any() || (points_.array() >= period_).any())
      throw std::invalid_argument("IndexSet: toroidal coordinates must lie in [0, period)");
  }
  for (Eigen::Index k = 0; k < points_.rows(); ++k)
    for (Eigen::Index l = k + 1; l < points_.rows(); ++l)
      if ((points_.row(k).array() == points_.row(l).array()).all())
        throw std::invalid_argument("IndexSet: duplicate index points");
}

double IndexSet::displacement_norm(const Eigen::VectorXd& d) const {
  if (metric_ == Metric::euclidean) return d.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    // minimum over period translates, coordinatewise
    double r = std::fmod(std::abs(d[i]), period_);
    r = std::min(r, period_ - r);
    acc += r * r;
  }
  return std::sqrt(acc);
}

double IndexSet::distance(Eigen::Index k, Eigen::Index l) const {
  return displacement_norm(points_.row(k) - points_.row(l));
}

Eigen::VectorXd IndexSet::reduce(const Eigen::VectorXd& d) const {
  if (metric_ == Metric::euclidean) return d;
  Eigen::VectorXd r = d;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    double v = std::fmod(r[i], period_);
    if (v < 0.0) v += period_;              // [0, period)
    if (v > period_ / 2.0) v -= period_;    // (-period/2, period/2]
    r[i] = v;
  }
  return r;
}

Eigen::VectorXd IndexSet::displacement(Eigen::Index k, Eigen::Index l) const {
  return reduce(points_.row(k) - points_.row(l));
}

bool IndexSet::same_as(const IndexSet& other) const {
  return metric_ == other.metric_ && period_ == other.period_ &&
         points_.rows() == other.points_.rows() && points_.cols() == other.points_.cols() &&
         (points_.array() == other.points_.array()).all();
}

IndexSet IndexSet::line(Eigen::Index count) {
  RealMatrix pts(count, 1);
  for (Eigen::Index k = 0; k < count; ++k) pts(k, 0) = static_cast<double>(k);
  return IndexSet(std::move(pts));
}

IndexSet IndexSet::torus_grid(double L, double step) {
  const auto per_side = static_cast<Eigen::Index>(std::llround(L / step));
  if (per_side <= 0 || std::abs(per_side * step - L) > 1e-9)
    throw std::invalid_argument("torus_grid: step must divide the period");
  RealMatrix pts(per_side * per_side, 2);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < per_side; ++i)
    for (Eigen::Index j = 0; j < per_side; ++j, ++r) {
      pts(r, 0) = static_cast<double>(i) * step;
      pts(r, 1) = static_cast<double>(j) * step;
    }
  return IndexSet(std::move(pts), Metric::toroidal, L);
}

// ---------------------------------------------------------------------------
// Block containers

BlockMatrix::BlockMatrix(IndexSet index_set, Eigen::Index n)
    : index_set_(std::move(index_set)), n_(n) {
  if (n_ <= 0) throw std::invalid_argument("BlockMatrix: block dimension must be positive");
  blocks_.assign(static_cast<std::size_t>(count()) * count(), ComplexMatrix::Zero(n_, n_));
}

ComplexMatrix& BlockMatrix::block(Eigen::Index k, Eigen::Index l) {
  return blocks_[static_cast<std::size_t>(k) * count() + l];
}

const ComplexMatrix& BlockMatrix::block(Eigen::Index k, Eigen::Index l) const {
  return blocks_[static_cast<std::size_t>(k) * count() + l];
}

BlockVector::BlockVector(IndexSet index_set, Eigen::Index n)
    : index_set_(std::move(index_set)), n_(n) {
  if (n_ <= 0) throw std::invalid_argument("BlockVector: dimension must be positive");
  components_.assign(static_cast<std::size_t>(count()), ComplexVector::Zero(n_));
}

// ---------------------------------------------------------------------------
// Dense kernels

double spectral_norm(const ComplexMatrix& A) {
  require_nonempty(A, "spectral_norm");
  require_finite(A, "spectral_norm");
  // (skew-)Hermitian inputs go through the eigenvalue routine: the largest
  // singular value is then exactly the largest |eigenvalue|, and zheevd is
  // considerably faster than zgesdd at the sizes used here.
  if (hermitian_within(A, tol_herm)) {
    const HermitianEig e = lapack_heig(A, false);
    return std::max(std::abs(e.eigenvalues[0]), std::abs(e.eigenvalues[e.eigenvalues.size() - 1]));
  }
  if (skew_hermitian_within(A, tol_herm)) {
    const HermitianEig e = lapack_heig(ComplexMatrix(cplx(0, -1) * A), false);
    return std::max(std::abs(e.eigenvalues[0]), std::abs(e.eigenvalues[e.eigenvalues.size() - 1]));
  }
  const RealVector s = lapack_singular_values(A);
  return s.size() ? s[0] : 0.0;
}

SvdFactorization svd(const ComplexMatrix& A) {
  require_nonempty(A, "svd");
  require_finite(A, "svd");
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  const lapack_int r = std::min(m, n);
  SvdFactorization f;
  f.left_vectors.resize(m, r);
  f.singular_values.resize(r);
  ComplexMatrix vt(r, n);
  ComplexMatrix work = A;
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                                         f.singular_values.data(), f.left_vectors.data(), m,
                                         vt.data(), r);
  if (info != 0)
    throw std::runtime_error("zgesdd failed to converge (info=" + std::to_string(info) + ")");
  f.right_vectors = vt.adjoint();
  return f;
}

ComplexMatrix pinv(const ComplexMatrix& A, double rtol) {
  require_nonempty(A, "pinv");
  require_finite(A, "pinv");
  if (rtol < 0.0) rtol = default_pinv_rtol(A.rows(), A.cols());

  // Hermitian inputs: the eigendecomposition is an SVD up to signs, so the
  // truncated inverse below is the identical Moore-Penrose result at a third
  // of the cost. This is the path the large flattened Gram matrices take.
  if (hermitian_within(A, tol_herm)) {
    const HermitianEig e = lapack_heig(A, true);
    const double lam_max = e.eigenvalues.cwiseAbs().maxCoeff();
    const double cut = rtol * lam_max;
    RealVector inv = RealVector::Zero(e.eigenvalues.size());
    for (Eigen::Index i = 0; i < inv.size(); ++i)
      if (std::abs(e.eigenvalues[i]) > cut) inv[i] = 1.0 / e.eigenvalues[i];
    return e.eigenvectors * inv.asDiagonal() * e.eigenvectors.adjoint();
  }

  const SvdFactorization f = svd(A);
  const double smax = f.singular_values.size() ? f.singular_values[0] : 0.0;
  const double cut = rtol * smax;
  RealVector inv = RealVector::Zero(f.singular_values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    if (f.singular_values[i] > cut) inv[i] = 1.0 / f.singular_values[i];
  return f.right_vectors * inv.asDiagonal() * f.left_vectors.adjoint();
}

ComplexMatrix pinv_via_formula(const ComplexMatrix& A, double rtol) {
  require_nonempty(A, "pinv_via_formula");
  require_finite(A, "pinv_via_formula");
  // Literal evaluation of the identity. The same relative cut is applied to
  // A A^*: its spectrum is the squared one, so this truncates A's singular
  // values at sqrt(rtol) * sigma_max, which is also where rounding noise of
  // the squared matrix sits. Rank decisions therefore match pinv(A) for
  // inputs whose spectrum does not straddle that band.
  const ComplexMatrix AAs = A * A.adjoint();
  const double r = (rtol < 0.0) ? default_pinv_rtol(A.rows(), A.cols()) : rtol;
  return A.adjoint() * pinv(AAs, r);
}

HermitianEig hermitian_eig(const ComplexMatrix& A) {
  require_nonempty(A, "hermitian_eig");
  require_finite(A, "hermitian_eig");
  if (A.rows() != A.cols())
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (!hermitian_within(A, tol_herm))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");
  return lapack_heig(A, true);
}

ComplexMatrix matrix_power_from_eig(const HermitianEig& e, double p) {
  RealVector powered(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < powered.size(); ++i) {
    const double lam = e.eigenvalues[i];
    if (p < 0.0 && lam <= 0.0)
      throw std::invalid_argument("matrix_power_from_eig: negative power of a nonpositive eigenvalue");
    powered[i] = std::pow(lam, p);
  }
  return e.eigenvectors * powered.asDiagonal() * e.eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------
// Block calculus

namespace {
void require_compatible(const BlockMatrix& A, const BlockMatrix& B, const char* what) {
  if (!A.index_set().same_as(B.index_set()) || A.n() != B.n())
    throw std::invalid_argument(std::string(what) + ": operands live on different index sets");
}
}  // namespace

BlockMatrix block_mul(const BlockMatrix& A, const BlockMatrix& B) {
  require_compatible(A, B, "block_mul");
  const Eigen::Index N = A.count();
  BlockMatrix C(A.index_set(), A.n());
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) {
      ComplexMatrix acc = ComplexMatrix::Zero(A.n(), A.n());
      for (Eigen::Index m = 0; m < N; ++m) acc.noalias() += A.block(k, m) * B.block(m, l);
      C.block(k, l) = std::move(acc);
    }
  return C;
}

BlockMatrix block_adjoint(const BlockMatrix& A) {
  const Eigen::Index N = A.count();
  BlockMatrix B(A.index_set(), A.n());
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) B.block(k, l) = A.block(l, k).adjoint();
  return B;
}

BlockVector block_apply(const BlockMatrix& A, const BlockVector& v) {
  if (!A.index_set().same_as(v.index_set()) || A.n() != v.n())
    throw std::invalid_argument("block_apply: operand index sets or dimensions differ");
  const Eigen::Index N = A.count();
  BlockVector out(A.index_set(), A.n());
  for (Eigen::Index k = 0; k < N; ++k) {
    ComplexVector acc = ComplexVector::Zero(A.n());
    for (Eigen::Index l = 0; l < N; ++l) acc.noalias() += A.block(k, l) * v.component(l);
    out.component(k) = std::move(acc);
  }
  return out;
}

ComplexMatrix flatten(const BlockMatrix& A) {
  const Eigen::Index N = A.count();
  const Eigen::Index n = A.n();
  ComplexMatrix M(N * n, N * n);
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) M.block(k * n, l * n, n, n) = A.block(k, l);
  return M;
}

ComplexVector flatten(const BlockVector& v) {
  const Eigen::Index N = v.count();
  const Eigen::Index n = v.n();
  ComplexVector x(N * n);
  for (Eigen::Index k = 0; k < N; ++k) x.segment(k * n, n) = v.component(k);
  return x;
}

BlockMatrix unflatten(const ComplexMatrix& M, const IndexSet& index_set, Eigen::Index n) {
  const Eigen::Index N = index_set.size();
  if (M.rows() != N * n || M.cols() != N * n)
    throw std::invalid_argument("unflatten: matrix dimensions do not match index set and block size");
  BlockMatrix A(index_set, n);
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) A.block(k, l) = M.block(k * n, l * n, n, n);
  return A;
}

BlockVector unflatten_vector(const ComplexVector& x, const IndexSet& index_set, Eigen::Index n) {
  const Eigen::Index N = index_set.size();
  if (x.size() != N * n)
    throw std::invalid_argument("unflatten_vector: vector length does not match index set and block size");
  BlockVector v(index_set, n);
  for (Eigen::Index k = 0; k < N; ++k) v.component(k) = x.segment(k * n, n);
  return v;
}

BlockMatrix block_pinv(const BlockMatrix& A, double rtol) {
  return unflatten(pinv(flatten(A), rtol), A.index_set(), A.n());
}

}  // namespace gflt
