#include "gflt/coorbit.hh"

#include "gflt/rng.hh"
#include "gflt/util.hh"

#include <stdexcept>

namespace gflt {

double bochner_norm(const BlockVector& v, const SeqSpaceSpec& spec) {
  return weighted_p_norm(v, spec.p, spec.omega);
}

double coorbit_norm(const ComplexVector& f, const GFrame& Td, const SeqSpaceSpec& spec) {
  return bochner_norm(analysis(Td, f), spec);
}

bool membership_Vpw(const ComplexVector& f, const GFrame& Td, const SeqSpaceSpec& spec,
                    double budget) {
  return coorbit_norm(f, Td, spec) <= budget;
}

CoorbitProfile reconstruction_profile(const GFrame& T, const GFrame& Td, const ComplexVector& f,
                                      const SeqSpaceSpec& spec,
                                      std::vector<Eigen::Index> enumeration) {
  const DualPairCheck pair = is_dual_pair(T, Td, 1e-8);
  if (!pair.ok)
    throw std::invalid_argument("reconstruction_profile: frames are not a dual pair");
  const std::vector<ComplexVector> partials = reconstruct_partials(T, Td, f, enumeration);
  CoorbitProfile profile;
  profile.enumeration = std::move(enumeration);
  profile.partial_norm_errors.reserve(partials.size());
  for (const ComplexVector& partial : partials)
    profile.partial_norm_errors.push_back(coorbit_norm(f - partial, Td, spec));
  profile.final_error = profile.partial_norm_errors.back();
  return profile;
}

NormEquivalenceReport norm_equivalence_check(const GFrame& Td, const GFrame& T, const GFrame& Ud,
                                             const GFrame& U, const SeqSpaceSpec& spec,
                                             int samples) {
  const auto match = [&](const GFrame& other) {
    return other.index_set().same_as(Td.index_set()) && other.n() == Td.n();
  };
  if (!match(T) || !match(Ud) || !match(U))
    throw std::invalid_argument("norm_equivalence_check: frames must share index set and n");
  if (samples <= 0) throw std::invalid_argument("norm_equivalence_check: samples must be > 0");

  NormEquivalenceReport report;
  report.bound_forward = weighted_opnorm(mixed_gram(Ud, T), spec.p, spec.omega).upper;
  report.bound_backward = weighted_opnorm(mixed_gram(Td, U), spec.p, spec.omega).upper;

  RngStream rng(1234, "norm-equivalence-samples");
  const Eigen::Index n = Td.n();
  for (int trial = 0; trial < samples; ++trial) {
    ComplexVector f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = rng.cnormal();
    const double via_Td = coorbit_norm(f, Td, spec);
    const double via_Ud = coorbit_norm(f, Ud, spec);
    if (via_Td > 0.0) report.max_ratio_forward = std::max(report.max_ratio_forward, via_Ud / via_Td);
    if (via_Ud > 0.0)
      report.max_ratio_backward = std::max(report.max_ratio_backward, via_Td / via_Ud);
  }
  return report;
}

cplx duality_pairing(const ComplexVector& f, const ComplexVector& g, const GFrame& T,
                        const GFrame& Td) {
  const DualPairCheck pair = is_dual_pair(T, Td, 1e-8);
  if (!pair.ok) throw std::invalid_argument("duality_pairing: frames are not a dual pair");
  std::vector<cplx> terms(T.count());
  for (Eigen::Index k = 0; k < T.count(); ++k)
    terms[k] = (Td.op(k) * f).dot(T.op(k) * g);
  return pairwise_sum(terms);
}

}  // namespace gflt
