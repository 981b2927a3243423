#include "doctest.h"
#include "gflt/gframe.hh"
#include "gflt/rng.hh"

#include <algorithm>
#include <cmath>

using namespace gflt;

namespace {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  ComplexMatrix A(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) A(i, j) = rng.cnormal();
  return A;
}

ComplexVector random_vector(Eigen::Index n, RngStream& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.cnormal();
  return v;
}

// generic random g-frame: dense Gaussian operators (almost surely a frame)
GFrame random_gframe(Eigen::Index count, Eigen::Index n, RngStream& rng) {
  std::vector<ComplexMatrix> ops(count);
  for (auto& T : ops) T = random_matrix(n, n, rng) / std::sqrt(double(count));
  return GFrame(IndexSet::line(count), std::move(ops));
}

// T_k = e_k (x) e_k: analysis picks out coordinates, S = identity
GFrame onb_gframe(Eigen::Index n) {
  std::vector<ComplexMatrix> ops(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ops[k] = ComplexMatrix::Zero(n, n);
    ops[k](k, k) = 1.0;
  }
  return GFrame(IndexSet::line(n), std::move(ops));
}

}  // namespace

TEST_CASE("analysis on simple frames and against the block-matrix route") {
  // single identity block
  GFrame single(IndexSet::line(1), {ComplexMatrix::Identity(3, 3)});
  RngStream rng(11, "analysis");
  const ComplexVector f = random_vector(3, rng);
  CHECK((analysis(single, f).component(0) - f).norm() == 0.0);

  // ONB g-frame: component k is f_k e_k
  const GFrame onb = onb_gframe(4);
  const ComplexVector g = random_vector(4, rng);
  const BlockVector coef = analysis(onb, g);
  for (Eigen::Index k = 0; k < 4; ++k) {
    CHECK(std::abs(coef.component(k)(k) - g(k)) == 0.0);
    CHECK(coef.component(k).norm() == doctest::Approx(std::abs(g(k))));
  }

  // random frame: agree with applying the stacked column block matrix
  const GFrame T = random_gframe(5, 3, rng);
  const ComplexVector h = random_vector(3, rng);
  BlockMatrix col(T.index_set(), 3);
  for (Eigen::Index k = 0; k < 5; ++k) col.block(k, 0) = T.op(k);
  BlockVector hvec(T.index_set(), 3);
  hvec.component(0) = h;
  const BlockVector via_block = block_apply(col, hvec);
  const BlockVector direct = analysis(T, h);
  for (Eigen::Index k = 0; k < 5; ++k)
    CHECK((via_block.component(k) - direct.component(k)).norm() <= 1e-13);

  CHECK_THROWS_AS(analysis(T, random_vector(4, rng)), std::invalid_argument);
}

TEST_CASE("synthesis is adjoint to analysis") {
  RngStream rng(22, "synthesis");
  GFrame single(IndexSet::line(1), {ComplexMatrix::Identity(3, 3)});
  BlockVector g1(single.index_set(), 3);
  g1.component(0) = random_vector(3, rng);
  CHECK((synthesis(single, g1) - g1.component(0)).norm() == 0.0);

  // Parseval case: synthesis inverts analysis
  const GFrame onb = onb_gframe(5);
  const ComplexVector f = random_vector(5, rng);
  CHECK((synthesis(onb, analysis(onb, f)) - f).norm() <= 1e-14);

  // adjointness <D_T g, h> = <g, C_T h>
  const GFrame T = random_gframe(6, 4, rng);
  BlockVector g(T.index_set(), 4);
  for (Eigen::Index k = 0; k < 6; ++k) g.component(k) = random_vector(4, rng);
  const ComplexVector h = random_vector(4, rng);
  const ComplexVector Dg = synthesis(T, g);
  const BlockVector Ch = analysis(T, h);
  cplx rhs = 0.0;
  for (Eigen::Index k = 0; k < 6; ++k) rhs += g.component(k).dot(Ch.component(k));
  CHECK(std::abs(Dg.dot(h) - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("frame operator forms and oracle") {
  RngStream rng(33, "frame-op");
  const GFrame onb = onb_gframe(4);
  CHECK((frame_operator(onb) - ComplexMatrix::Identity(4, 4)).norm() <= 1e-15);

  // single scaled identity: S = |c|^2 I
  const cplx c(1.5, -2.0);
  GFrame scaled(IndexSet::line(1), {c * ComplexMatrix::Identity(3, 3)});
  CHECK((frame_operator(scaled) - std::norm(c) * ComplexMatrix::Identity(3, 3)).norm() <= 1e-13);

  // column-by-column: S e_j = D_T C_T e_j
  const GFrame T = random_gframe(7, 4, rng);
  const ComplexMatrix S = frame_operator(T);
  for (Eigen::Index j = 0; j < 4; ++j) {
    ComplexVector e = ComplexVector::Zero(4);
    e(j) = 1.0;
    CHECK((S * e - synthesis(T, analysis(T, e))).norm() <= 1e-12 * S.norm());
  }
}

TEST_CASE("gram matrices: structure and factorized flatten") {
  RngStream rng(44, "gram");
  // ONB: block diagonal with rank-one diagonal blocks
  const GFrame onb = onb_gframe(3);
  const BlockMatrix G = gram(onb);
  for (Eigen::Index k = 0; k < 3; ++k)
    for (Eigen::Index l = 0; l < 3; ++l) {
      if (k == l) {
        CHECK(G.block(k, k).norm() == doctest::Approx(1.0));
        CHECK(std::abs(G.block(k, k)(k, k) - 1.0) == 0.0);
      } else {
        CHECK(G.block(k, l).norm() == 0.0);
      }
    }

  // projections onto orthogonal two-dimensional subspaces: off-diagonal
  // blocks vanish exactly
  std::vector<ComplexMatrix> proj(3, ComplexMatrix::Zero(6, 6));
  for (Eigen::Index k = 0; k < 3; ++k) {
    proj[k](2 * k, 2 * k) = 1.0;
    proj[k](2 * k + 1, 2 * k + 1) = 1.0;
  }
  const GFrame orth(IndexSet::line(3), std::move(proj));
  const BlockMatrix Go = gram(orth);
  for (Eigen::Index k = 0; k < 3; ++k)
    for (Eigen::Index l = 0; l < 3; ++l)
      if (k != l) CHECK(Go.block(k, l).norm() == 0.0);

  // random: flatten(G) equals stacked-analysis times its adjoint
  const GFrame T = random_gframe(5, 3, rng);
  ComplexMatrix C(5 * 3, 3);
  for (Eigen::Index k = 0; k < 5; ++k) C.middleRows(k * 3, 3) = T.op(k);
  const ComplexMatrix GT = flatten(gram(T));
  CHECK((GT - C * C.adjoint()).norm() <= 1e-12 * GT.norm());

  // block-level Hermitian symmetry
  const BlockMatrix Gb = gram(T);
  CHECK((flatten(block_adjoint(Gb)) - GT).norm() <= 1e-12 * GT.norm());
}

TEST_CASE("frame bounds on known and random frames") {
  RngStream rng(55, "bounds");
  const FrameBounds onb_b = frame_bounds(onb_gframe(4));
  CHECK(onb_b.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(onb_b.upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(onb_b.is_frame);

  // duplicated ONB doubles the frame operator
  std::vector<ComplexMatrix> dup_ops;
  for (int rep = 0; rep < 2; ++rep)
    for (Eigen::Index k = 0; k < 4; ++k) {
      ComplexMatrix E = ComplexMatrix::Zero(4, 4);
      E(k, k) = 1.0;
      dup_ops.push_back(E);
    }
  const GFrame dup(IndexSet::line(8), std::move(dup_ops));
  const FrameBounds dup_b = frame_bounds(dup);
  CHECK(dup_b.lower == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dup_b.upper == doctest::Approx(2.0).epsilon(1e-12));

  // Rayleigh quotients stay inside [A, B]
  const GFrame T = random_gframe(9, 5, rng);
  const FrameBounds b = frame_bounds(T);
  CHECK(b.lower <= b.upper);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexVector f = random_vector(5, rng);
    double q = 0.0;
    for (Eigen::Index k = 0; k < 9; ++k) q += (T.op(k) * f).squaredNorm();
    q /= f.squaredNorm();
    CHECK(q >= b.lower - 1e-10 * b.upper);
    CHECK(q <= b.upper * (1.0 + 1e-10));
  }

  // operator norms sit below sqrt(B)
  for (Eigen::Index k = 0; k < 9; ++k)
    CHECK(spectral_norm(T.op(k)) <= std::sqrt(b.upper) * (1.0 + 1e-12));
}

TEST_CASE("canonical dual: bounds invert and duality holds") {
  RngStream rng(66, "dual");
  // ONB is self-dual
  const GFrame onb = onb_gframe(4);
  const GFrame onbd = canonical_dual(onb);
  for (Eigen::Index k = 0; k < 4; ++k) CHECK((onbd.op(k) - onb.op(k)).norm() <= 1e-13);

  // tight frame: dual is T / A
  std::vector<ComplexMatrix> tight_ops;
  for (Eigen::Index k = 0; k < 4; ++k) {
    ComplexMatrix E = ComplexMatrix::Zero(4, 4);
    E(k, k) = 3.0;  // S = 9 I
    tight_ops.push_back(E);
  }
  const GFrame tight(IndexSet::line(4), std::move(tight_ops));
  const GFrame tight_dual = canonical_dual(tight);
  for (Eigen::Index k = 0; k < 4; ++k)
    CHECK((tight_dual.op(k) - tight.op(k) / 9.0).norm() <= 1e-12);

  const GFrame T = random_gframe(8, 5, rng);
  const FrameBounds b = frame_bounds(T);
  const GFrame Td = canonical_dual(T);
  const FrameBounds bd = frame_bounds(Td);
  CHECK(std::abs(bd.lower - 1.0 / b.upper) <= 1e-8 / b.upper);
  CHECK(std::abs(bd.upper - 1.0 / b.lower) <= 1e-8 / b.lower);
  CHECK(is_dual_pair(T, Td, 1e-9).ok);

  // a frame that is visibly not Parseval is not self-dual
  CHECK_FALSE(is_dual_pair(tight, tight, 1e-6).ok);
  CHECK(is_dual_pair(onb, onb, 1e-14).ok);

  // zero family is rejected
  std::vector<ComplexMatrix> zero_ops(3, ComplexMatrix::Zero(2, 2));
  const GFrame zero(IndexSet::line(3), std::move(zero_ops));
  CHECK_THROWS_AS(canonical_dual(zero), std::invalid_argument);
}

TEST_CASE("reconstruction with dual pairs") {
  RngStream rng(77, "reconstruct");
  const GFrame onb = onb_gframe(4);
  const ComplexVector f = random_vector(4, rng);
  CHECK((reconstruct(onb, onb, f) - f).norm() <= 1e-14);

  const GFrame T = random_gframe(7, 4, rng);
  const GFrame Td = canonical_dual(T);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector g = random_vector(4, rng);
    // both orders: sum T^* T S^{-1} g and sum S^{-1} T^* T g
    CHECK((reconstruct(T, Td, g) - g).norm() <= 1e-10 * g.norm());
    CHECK((reconstruct(Td, T, g) - g).norm() <= 1e-10 * g.norm());
  }

  // partial sums over the default enumeration land on the full sum
  const std::vector<Eigen::Index> order = centroid_order(T.index_set());
  CHECK(order.size() == 7);
  const ComplexVector h = random_vector(4, rng);
  const auto partials = reconstruct_partials(T, Td, h, order);
  CHECK((partials.back() - h).norm() <= 1e-10 * h.norm());
  // order independence of the completed sum
  std::vector<Eigen::Index> reversed(order.rbegin(), order.rend());
  const auto partials_rev = reconstruct_partials(T, Td, h, reversed);
  CHECK((partials.back() - partials_rev.back()).norm() <= 1e-12 * h.norm());
}

TEST_CASE("gram factorization identities") {
  RngStream rng(88, "gram-fact");
  const GramFactorizationReport onb_rep = verify_gram_factorization(onb_gframe(4));
  CHECK(onb_rep.residual_dual_gram <= 1e-12);
  CHECK(onb_rep.residual_mixed <= 1e-12);
  CHECK(onb_rep.projection_defect <= 1e-12);

  // tight frame: dual Gram is G / A^2
  std::vector<ComplexMatrix> tight_ops;
  for (Eigen::Index k = 0; k < 3; ++k) {
    ComplexMatrix E = ComplexMatrix::Zero(3, 3);
    E(k, k) = 2.0;  // S = 4 I
    tight_ops.push_back(E);
  }
  const GFrame tight(IndexSet::line(3), std::move(tight_ops));
  const ComplexMatrix Gd = flatten(gram(canonical_dual(tight)));
  const ComplexMatrix G = flatten(gram(tight));
  CHECK((Gd - G / 16.0).norm() <= 1e-12 * Gd.norm());

  const GramFactorizationReport rep = verify_gram_factorization(random_gframe(12, 8, rng));
  CHECK(rep.residual_dual_gram <= 1e-8);
  CHECK(rep.residual_mixed <= 1e-8);
  CHECK(rep.projection_defect <= 1e-9);
}

TEST_CASE("bessel bound from the gram matrix") {
  RngStream rng(99, "bessel");
  CHECK(bessel_bound_from_gram(onb_gframe(4)) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<ComplexMatrix> zero_ops(3, ComplexMatrix::Zero(2, 2));
  CHECK(bessel_bound_from_gram(GFrame(IndexSet::line(3), std::move(zero_ops))) == 0.0);

  const GFrame T = random_gframe(6, 4, rng);
  const double bound = bessel_bound_from_gram(T);
  const FrameBounds b = frame_bounds(T);
  CHECK(b.upper <= bound * (1.0 + 1e-12));
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexVector f = random_vector(4, rng);
    double q = 0.0;
    for (Eigen::Index k = 0; k < 6; ++k) q += (T.op(k) * f).squaredNorm();
    CHECK(q / f.squaredNorm() <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("centroid enumeration starts near the middle and covers everything") {
  const IndexSet X = IndexSet::line(5);  // centroid at 2
  const auto order = centroid_order(X);
  CHECK(order.front() == 2);
  std::vector<Eigen::Index> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (Eigen::Index k = 0; k < 5; ++k) CHECK(sorted[k] == k);
}
