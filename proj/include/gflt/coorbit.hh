#pragma once

#include "gflt/localization.hh"

// Weighted Bochner sequence norms on block vectors, co-orbit norms measured
// through the analysis map of a dual frame, reconstruction diagnostics in
// those norms, norm equivalence across dual pairs, and the duality pairing.
// On a finite index set every co-orbit space equals C^n as a set; only the
// norms differ, so everything here computes norms and never completions.

namespace gflt {

// Exponent and weight of ell^p_omega(X; C^n). p = 0 is accepted as an alias
// for p = inf (the two sequence norms coincide on finite X).
struct SeqSpaceSpec {
  double p = 2.0;
  Weight omega = Weight::one();
};

struct CoorbitProfile {
  std::vector<Eigen::Index> enumeration;
  std::vector<double> partial_norm_errors;  // co-orbit norm of f minus each partial sum
  double final_error = 0.0;                 // last entry of partial_norm_errors
};

struct NormEquivalenceReport {
  double max_ratio_forward = 0.0;   // max over samples of ||C_Ud f|| / ||C_Td f||
  double max_ratio_backward = 0.0;  // and the reverse direction
  double bound_forward = 0.0;       // certified norm of mixed_gram(Ud, T)
  double bound_backward = 0.0;      // certified norm of mixed_gram(Td, U)
};

// || (||v_k|| * omega_k)_k ||_p
double bochner_norm(const BlockVector& v, const SeqSpaceSpec& spec);

// bochner norm of the analysis coefficients (C_Td f)_k = Td_k f
double coorbit_norm(const ComplexVector& f, const GFrame& Td, const SeqSpaceSpec& spec);

// diagnostic threshold test: coorbit_norm(f) <= budget. On finite X every f
// belongs to the co-orbit space; the budget emulates the infinite-dimensional
// membership distinction.
bool membership_Vpw(const ComplexVector& f, const GFrame& Td, const SeqSpaceSpec& spec,
                    double budget);

// partial sums of f = sum_k T_k^* Td_k f over the enumeration, with errors
// measured in the co-orbit norm of Td; requires (T, Td) dual within 1e-8
CoorbitProfile reconstruction_profile(const GFrame& T, const GFrame& Td, const ComplexVector& f,
                                      const SeqSpaceSpec& spec,
                                      std::vector<Eigen::Index> enumeration);

// sampled two-sided comparison of the co-orbit norms of (Td, T) and (Ud, U),
// with the mixed-Gram operator norms as certified bounds (p in {1, 2, inf})
NormEquivalenceReport norm_equivalence_check(const GFrame& Td, const GFrame& T, const GFrame& Ud,
                                             const GFrame& U, const SeqSpaceSpec& spec,
                                             int samples);

// beta(f, g) = sum_k <Td_k f, T_k g>, conjugate-linear in f; equals <f, g>
// for a dual pair
cplx duality_pairing(const ComplexVector& f, const ComplexVector& g, const GFrame& T,
                        const GFrame& Td);

}  // namespace gflt
