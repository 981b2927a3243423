#include "doctest.h"
#include "gflt/coorbit.hh"
#include "gflt/rng.hh"

#include <cmath>
#include <limits>
#include <numeric>

using namespace gflt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

GFrame random_gframe(Eigen::Index count, Eigen::Index n, RngStream& rng) {
  std::vector<ComplexMatrix> ops(count);
  for (auto& T : ops) T = random_matrix(n, n, rng) / std::sqrt(double(count));
  return GFrame(IndexSet::line(count), std::move(ops));
}

GFrame onb_gframe(Eigen::Index n) {
  std::vector<ComplexMatrix> ops(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ops[k] = ComplexMatrix::Zero(n, n);
    ops[k](k, k) = 1.0;
  }
  return GFrame(IndexSet::line(n), std::move(ops));
}

}  // namespace

TEST_CASE("bochner norm: single component, homogeneity, flatten oracle") {
  const IndexSet X = IndexSet::line(4);
  RngStream rng(21, "bochner");
  const ComplexVector h = random_vector(3, rng);
  for (const double p : {0.5, 1.0, 2.0, 3.5, kInf}) {
    BlockVector v(X, 3);
    v.component(2) = h;
    CHECK(bochner_norm(v, {p, Weight::one()}) == doctest::Approx(h.norm()).epsilon(1e-13));
  }

  BlockVector v(X, 3);
  for (Eigen::Index k = 0; k < 4; ++k) v.component(k) = random_vector(3, rng);
  const SeqSpaceSpec spec{1.5, Weight::polynomial(1.0)};
  const double base = bochner_norm(v, spec);
  BlockVector v3(X, 3);
  for (Eigen::Index k = 0; k < 4; ++k) v3.component(k) = cplx(0.0, -3.0) * v.component(k);
  CHECK(bochner_norm(v3, spec) == doctest::Approx(3.0 * base).epsilon(1e-13));

  CHECK(bochner_norm(v, {2.0, Weight::one()}) ==
        doctest::Approx(flatten(v).norm()).epsilon(1e-13));

  // the p = 0 convention coincides with the weighted sup
  CHECK(bochner_norm(v, {0.0, spec.omega}) == bochner_norm(v, {kInf, spec.omega}));

  // p-subadditivity of the quasi-norm below p = 1
  BlockVector w(X, 3), sum(X, 3);
  for (Eigen::Index k = 0; k < 4; ++k) {
    w.component(k) = random_vector(3, rng);
    sum.component(k) = v.component(k) + w.component(k);
  }
  for (const double p : {0.3, 0.5, 0.8}) {
    const SeqSpaceSpec qs{p, Weight::polynomial(1.0)};
    const double lhs = std::pow(bochner_norm(sum, qs), p);
    const double rhs = std::pow(bochner_norm(v, qs), p) + std::pow(bochner_norm(w, qs), p);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("coorbit norm: zero vector, Parseval, direct summation oracle") {
  const GFrame onb = onb_gframe(5);
  RngStream rng(22, "coorbit-norm");
  CHECK(coorbit_norm(ComplexVector::Zero(5), onb, {2.0, Weight::one()}) == 0.0);

  const ComplexVector f = random_vector(5, rng);
  CHECK(coorbit_norm(f, onb, {2.0, Weight::one()}) == doctest::Approx(f.norm()).epsilon(1e-13));

  const GFrame T = random_gframe(6, 4, rng);
  const ComplexVector g = random_vector(4, rng);
  const Weight w1 = Weight::polynomial(1.0);
  double hand = 0.0;
  for (Eigen::Index k = 0; k < 6; ++k)
    hand += (T.op(k) * g).norm() * weight_at_point(w1, T.index_set(), k);
  CHECK(coorbit_norm(g, T, {1.0, w1}) == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("membership threshold flips at the scale predicted by homogeneity") {
  RngStream rng(23, "membership");
  const GFrame T = random_gframe(5, 3, rng);
  const SeqSpaceSpec spec{2.0, Weight::polynomial(1.0)};
  const ComplexVector f = random_vector(3, rng);

  CHECK(membership_Vpw(ComplexVector::Zero(3), T, spec, 0.0));
  CHECK(membership_Vpw(f, T, spec, kInf));

  const double norm = coorbit_norm(f, T, spec);
  const double budget = 2.5;
  const double critical = budget / norm;
  CHECK(membership_Vpw((0.999 * critical) * f, T, spec, budget));
  CHECK_FALSE(membership_Vpw((1.001 * critical) * f, T, spec, budget));
}

TEST_CASE("reconstruction profile on an orthonormal-style frame") {
  const GFrame onb = onb_gframe(4);
  ComplexVector f = ComplexVector::Zero(4);
  f(0) = 1.0;
  f(2) = -2.0;
  const SeqSpaceSpec spec{2.0, Weight::one()};
  std::vector<Eigen::Index> order{0, 1, 2, 3};
  const CoorbitProfile prof = reconstruction_profile(onb, onb, f, spec, order);
  REQUIRE(prof.partial_norm_errors.size() == 4);
  // error vanishes exactly once both support indices {0, 2} are included
  CHECK(prof.partial_norm_errors[0] == doctest::Approx(2.0));
  CHECK(prof.partial_norm_errors[1] == doctest::Approx(2.0));
  CHECK(prof.partial_norm_errors[2] == 0.0);
  CHECK(prof.partial_norm_errors[3] == 0.0);
  CHECK(prof.final_error == prof.partial_norm_errors.back());

  // a different enumeration reaches the same final error
  const CoorbitProfile rev = reconstruction_profile(onb, onb, f, spec, {3, 2, 1, 0});
  CHECK(rev.final_error == prof.final_error);
}

TEST_CASE("reconstruction profile converges for random frames and rejects non-duals") {
  RngStream rng(24, "recon-profile");
  const GFrame T = random_gframe(7, 4, rng);
  const GFrame Td = canonical_dual(T);
  const ComplexVector f = random_vector(4, rng);
  std::vector<Eigen::Index> order(7);
  std::iota(order.begin(), order.end(), 0);
  for (const double p : {1.0, 2.0, kInf}) {
    const SeqSpaceSpec spec{p, Weight::polynomial(1.0)};
    const CoorbitProfile prof = reconstruction_profile(T, Td, f, spec, order);
    CHECK(prof.final_error <= 1e-8 * coorbit_norm(f, Td, spec));
    CHECK(prof.final_error <= prof.partial_norm_errors.front());
  }

  CHECK_THROWS_AS(reconstruction_profile(T, T, f, {2.0, Weight::one()}, order),
                  std::invalid_argument);
}

TEST_CASE("norm equivalence: identical pairs give unit ratios within the bounds") {
  RngStream rng(25, "equiv-identity");
  const GFrame T = random_gframe(6, 3, rng);
  const GFrame Td = canonical_dual(T);
  for (const double p : {1.0, 2.0, kInf}) {
    const SeqSpaceSpec spec{p, Weight::polynomial(1.0)};
    const NormEquivalenceReport rep = norm_equivalence_check(Td, T, Td, T, spec, 25);
    CHECK(rep.max_ratio_forward == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rep.max_ratio_backward == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rep.max_ratio_forward <= rep.bound_forward + 1e-9);
    CHECK(rep.max_ratio_backward <= rep.bound_backward + 1e-9);
  }
}

TEST_CASE("norm equivalence: permuted frame stays within the mixed-Gram bounds") {
  RngStream rng(26, "equiv-permuted");
  const GFrame T = random_gframe(6, 4, rng);
  const GFrame Td = canonical_dual(T);
  // conjugate every operator by a fixed coordinate permutation
  ComplexMatrix P = ComplexMatrix::Zero(4, 4);
  P(0, 2) = 1.0;
  P(1, 0) = 1.0;
  P(2, 3) = 1.0;
  P(3, 1) = 1.0;
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = 0; k < 6; ++k) ops.push_back(T.op(k) * P);
  const GFrame U(T.index_set(), std::move(ops));
  const GFrame Ud = canonical_dual(U);
  for (const double p : {1.0, 2.0, kInf}) {
    const SeqSpaceSpec spec{p, Weight::one()};
    const NormEquivalenceReport rep = norm_equivalence_check(Td, T, Ud, U, spec, 40);
    CHECK(rep.max_ratio_forward <= rep.bound_forward + 1e-9);
    CHECK(rep.max_ratio_backward <= rep.bound_backward + 1e-9);
  }
}

TEST_CASE("norm equivalence: orthonormal vs duplicated frame has ratio sqrt(2)") {
  // both frames live on 8 points: T carries an ONB of C^4 on the first four
  // and zero operators after; U repeats the ONB twice, so S_U = 2 I
  const Eigen::Index n = 4;
  const IndexSet X = IndexSet::line(2 * n);
  std::vector<ComplexMatrix> t_ops(2 * n, ComplexMatrix::Zero(n, n));
  std::vector<ComplexMatrix> u_ops(2 * n, ComplexMatrix::Zero(n, n));
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    if (k < n) t_ops[k](k, k) = 1.0;
    u_ops[k](k % n, k % n) = 1.0;
  }
  const GFrame T(X, std::move(t_ops));
  const GFrame U(X, std::move(u_ops));
  const GFrame Td = canonical_dual(T);
  const GFrame Ud = canonical_dual(U);
  const SeqSpaceSpec spec{2.0, Weight::one()};
  const NormEquivalenceReport rep = norm_equivalence_check(Td, T, Ud, U, spec, 30);
  // ||C_Ud f|| = ||f|| / sqrt(2) while ||C_Td f|| = ||f|| for every f
  CHECK(rep.max_ratio_forward == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.max_ratio_backward == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.max_ratio_forward <= rep.bound_forward + 1e-9);
  CHECK(rep.max_ratio_backward <= rep.bound_backward + 1e-9);

  // mismatched index sets are rejected
  const GFrame small = onb_gframe(4);
  CHECK_THROWS_AS(norm_equivalence_check(Td, T, canonical_dual(small), small, spec, 5),
                  std::invalid_argument);
}

TEST_CASE("duality pairing equals the inner product and obeys Hoelder bounds") {
  const GFrame onb = onb_gframe(4);
  ComplexVector e1 = ComplexVector::Zero(4), e2 = ComplexVector::Zero(4);
  e1(0) = 1.0;
  e2(1) = 1.0;
  CHECK(std::abs(duality_pairing(e1, e1, onb, onb) - cplx(1.0, 0.0)) <= 1e-14);
  CHECK(std::abs(duality_pairing(e1, e2, onb, onb)) <= 1e-12);

  RngStream rng(27, "pairing");
  const GFrame T = random_gframe(6, 4, rng);
  const GFrame Td = canonical_dual(T);
  const Weight w = Weight::polynomial(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector f = random_vector(4, rng);
    const ComplexVector g = random_vector(4, rng);
    const cplx beta = duality_pairing(f, g, T, Td);
    CHECK(std::abs(beta - f.dot(g)) <= 1e-10 * std::max(1.0, f.norm() * g.norm()));
    // Hoelder pairs (p, q): (1, inf) and (2, 2)
    const double b1 = coorbit_norm(f, Td, {1.0, w}) * coorbit_norm(g, T, {kInf, dual_weight(w)});
    const double b2 = coorbit_norm(f, Td, {2.0, w}) * coorbit_norm(g, T, {2.0, dual_weight(w)});
    CHECK(std::abs(beta) <= b1 * (1.0 + 1e-12));
    CHECK(std::abs(beta) <= b2 * (1.0 + 1e-12));
  }

  CHECK_THROWS_AS(duality_pairing(e1, e2, T, T), std::invalid_argument);
}

TEST_CASE("synthesis of sequence-space data lands inside the mixed-Gram bound") {
  RngStream rng(28, "synthesis-bound");
  const GFrame T = random_gframe(6, 3, rng);
  const GFrame Td = canonical_dual(T);
  const Weight w = Weight::polynomial(1.0);
  for (const double p : {1.0, 2.0, kInf}) {
    const double gram_bound = weighted_opnorm(mixed_gram(Td, T), p, w).upper;
    for (int trial = 0; trial < 20; ++trial) {
      BlockVector g(T.index_set(), 3);
      for (Eigen::Index k = 0; k < 6; ++k) g.component(k) = random_vector(3, rng);
      const double lhs = coorbit_norm(synthesis(T, g), Td, {p, w});
      CHECK(lhs <= gram_bound * bochner_norm(g, {p, w}) * (1.0 + 1e-10));
    }
  }
}
