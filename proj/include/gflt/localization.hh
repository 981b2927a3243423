#pragma once

#include "gflt/gframe.hh"

#include <optional>
#include <utility>
#include <vector>

// Spectral-algebra norms on operator block matrices (Jaffard, weighted Schur,
// Baskakov-Gohberg-Sjostrand), weights and moderateness, polynomial decay
// fits of block-norm profiles, and weighted operator-norm estimates on the
// Bochner sequence spaces ell^p_omega(X; C^n).

namespace gflt {

// floor below which block norms are treated as numerically zero in decay fits
inline constexpr double fit_floor = 1e-13;

// Positive weight on R^m. Polynomial kind is nu_s(x) = (1+|x|)^exponent with
// |.| Euclidean (user-facing factories take s >= 0; dual_weight flips the
// sign). Sample kind is a finite table keyed by exact point coordinates.
class Weight {
 public:
  static Weight one() { return polynomial(0.0); }
  static Weight polynomial(double s);
  static Weight samples(std::vector<std::pair<Eigen::VectorXd, double>> table);

  double eval(const Eigen::VectorXd& x) const;
  // polynomial kind only: evaluate from the norm |x| alone
  double eval_norm(double r) const;

  bool is_polynomial() const { return kind_ == Kind::polynomial; }
  double exponent() const { return exponent_; }
  // GRS condition is metadata derived from the kind, never verified on data
  bool grs() const { return kind_ == Kind::polynomial; }

  Weight reciprocal() const;

 private:
  enum class Kind { polynomial, samples };
  Kind kind_ = Kind::polynomial;
  double exponent_ = 0.0;
  std::vector<std::pair<Eigen::VectorXd, double>> table_;  // sorted lexicographically
};

// pointwise reciprocal (the dual weight 1/omega)
Weight dual_weight(const Weight& w);

struct ModeratenessReport {
  double constant = 0.0;  // max over sampled pairs of m(x+x') / (m(x) nu(x'))
  Eigen::Index pairs_checked = 0;
};

struct AlgebraSpec {
  enum class Family { jaffard, schur, bgs };
  Family family = Family::jaffard;
  double s = 0.0;  // jaffard exponent
  Weight nu;       // schur/bgs weight

  static AlgebraSpec jaffard(double s);
  static AlgebraSpec schur(Weight nu);
  static AlgebraSpec bgs(Weight nu);
};

struct DecayFit {
  double C = 0.0;
  double s_fit = 0.0;
  double rms_log_residual = 0.0;
  Eigen::Index pairs_used = 0;  // envelope points entering the fit
};

struct LocalizationReport {
  AlgebraSpec algebra;
  double norm_value = 0.0;
  std::optional<DecayFit> decay_fit;  // absent when fewer than 3 usable distances
  std::pair<Eigen::Index, Eigen::Index> sup_attained_at{0, 0};
};

struct OpNormBracket {
  double lower = 0.0;
  double upper = 0.0;
};

// scalar matrix of block spectral norms M_{k,l} = ||A_{k,l}||
RealMatrix scalarize(const BlockMatrix& A);
// block matrix with blocks M_{k,l} * I_n
BlockMatrix embed_scalar(const RealMatrix& M, const IndexSet& X, Eigen::Index n);

double jaffard_norm(const BlockMatrix& A, double s);
double schur_norm(const BlockMatrix& A, const Weight& nu);
double bgs_norm(const BlockMatrix& A, const Weight& nu);

// same norms evaluated from a precomputed block-norm matrix (used where Gram
// blocks have closed-form norms and assembling operators would be wasteful)
double jaffard_norm_scalar(const RealMatrix& norms, const IndexSet& X, double s);
double schur_norm_scalar(const RealMatrix& norms, const IndexSet& X, const Weight& nu);
double bgs_norm_scalar(const RealMatrix& norms, const IndexSet& X, const Weight& nu);

double algebra_norm(const BlockMatrix& A, const AlgebraSpec& spec);
double algebra_norm_scalar(const RealMatrix& norms, const IndexSet& X, const AlgebraSpec& spec);

// true iff ||B_{k,l}|| <= ||A_{k,l}|| everywhere and norm(B) <= norm(A)
bool solidity_check(const BlockMatrix& A, const BlockMatrix& B, const AlgebraSpec& spec);

// least-squares fit of the per-distance maximum block-norm envelope against
// C (1+d)^{-s}; throws when fewer than 3 distances carry norms above fit_floor
DecayFit fit_polynomial_decay(const BlockMatrix& A);
DecayFit fit_polynomial_decay_scalar(const RealMatrix& norms, const IndexSet& X);

// Operator norm of A on ell^p_omega(X; C^n), where the norm of a block vector
// is the plain ell^p norm of (||v_k|| omega(k))_k. For p in {1, 2, inf} the
// bracket is tight: p=2 is the spectral norm of the weight-conjugated
// flattened matrix, p=1/inf are the weighted column/row sums of the
// scalarized matrix (the standard dominance norms, which the tests treat as
// the exact values). Other p get a certified bracket: best of 500 random
// Rayleigh quotients below, interpolation (1<p<inf) or p-subadditivity (p<1)
// above. Rejects p <= 0.
OpNormBracket weighted_opnorm(const BlockMatrix& A, double p, const Weight& omega);

// weighted ell^p norm of a block vector, sup-norm for p = inf (p = 0 aliases
// to inf, matching the sequence-space convention used by the co-orbit module)
double weighted_p_norm(const BlockVector& v, double p, const Weight& omega);

// weight value at index point k (toroidal sets evaluate at the reduced point)
double weight_at_point(const Weight& w, const IndexSet& X, Eigen::Index k);
// weight value at the reduced displacement between points k and l
double weight_between(const Weight& w, const IndexSet& X, Eigen::Index k, Eigen::Index l);

// moderateness constant of m relative to nu over all pairs of distinct
// reduced displacements of X
ModeratenessReport moderateness_report(const Weight& m, const Weight& nu, const IndexSet& X);

// p0 = dim/(s-r) for the Jaffard algebra J_s with a nu_r-moderate weight
double jaffard_admissible_p0(double s, double r, Eigen::Index dim);

LocalizationReport localization_report(const GFrame& T, const GFrame* U, const AlgebraSpec& spec);

}  // namespace gflt
