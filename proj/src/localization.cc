#include "gflt/localization.hh"

#include "gflt/rng.hh"
#include "gflt/util.hh"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace gflt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_key(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// Weights

Weight Weight::polynomial(double s) {
  if (s < 0.0) throw std::invalid_argument("Weight::polynomial: exponent must be >= 0");
  Weight w;
  w.kind_ = Kind::polynomial;
  w.exponent_ = s;
  return w;
}

Weight Weight::samples(std::vector<std::pair<Eigen::VectorXd, double>> table) {
  if (table.empty()) throw std::invalid_argument("Weight::samples: empty table");
  for (const auto& [pt, val] : table) {
    (void)pt;
    if (!(val > 0.0)) throw std::invalid_argument("Weight::samples: values must be positive");
  }
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return to_key(a.first) < to_key(b.first);
  });
  Weight w;
  w.kind_ = Kind::samples;
  w.table_ = std::move(table);
  return w;
}

double Weight::eval_norm(double r) const {
  if (kind_ != Kind::polynomial)
    throw std::invalid_argument("Weight::eval_norm: only defined for polynomial weights");
  return std::pow(1.0 + r, exponent_);
}

double Weight::eval(const Eigen::VectorXd& x) const {
  if (kind_ == Kind::polynomial) return eval_norm(x.norm());
  const auto key = to_key(x);
  auto it = std::lower_bound(table_.begin(), table_.end(), key,
                             [](const auto& entry, const std::vector<double>& k) {
                               return to_key(entry.first) < k;
                             });
  if (it == table_.end() || to_key(it->first) != key)
    throw std::invalid_argument("Weight::eval: point not present in sample table");
  return it->second;
}

Weight Weight::reciprocal() const {
  Weight w = *this;
  if (kind_ == Kind::polynomial) {
    w.exponent_ = -exponent_;
  } else {
    for (auto& [pt, val] : w.table_) {
      (void)pt;
      val = 1.0 / val;
    }
  }
  return w;
}

Weight dual_weight(const Weight& w) { return w.reciprocal(); }

double weight_at_point(const Weight& w, const IndexSet& X, Eigen::Index k) {
  const Eigen::VectorXd p = X.points().row(k);
  if (w.is_polynomial()) return w.eval_norm(X.displacement_norm(p));
  return w.eval(X.reduce(p));
}

double weight_between(const Weight& w, const IndexSet& X, Eigen::Index k, Eigen::Index l) {
  if (w.is_polynomial()) return w.eval_norm(X.distance(k, l));
  return w.eval(X.displacement(k, l));
}

ModeratenessReport moderateness_report(const Weight& m, const Weight& nu, const IndexSet& X) {
  // distinct reduced displacements of X, including 0
  std::set<std::vector<double>> seen;
  std::vector<Eigen::VectorXd> disp;
  for (Eigen::Index k = 0; k < X.size(); ++k)
    for (Eigen::Index l = 0; l < X.size(); ++l) {
      Eigen::VectorXd d = X.displacement(k, l);
      if (seen.insert(to_key(d)).second) disp.push_back(std::move(d));
    }
  ModeratenessReport rep;
  for (const Eigen::VectorXd& x : disp)
    for (const Eigen::VectorXd& xp : disp) {
      const double ratio =
          m.eval(X.reduce(x + xp)) / (m.eval(X.reduce(x)) * nu.eval(X.reduce(xp)));
      rep.constant = std::max(rep.constant, ratio);
      ++rep.pairs_checked;
    }
  return rep;
}

double jaffard_admissible_p0(double s, double r, Eigen::Index dim) {
  if (!(s > r)) throw std::invalid_argument("jaffard_admissible_p0: requires s > r");
  return static_cast<double>(dim) / (s - r);
}

// ---------------------------------------------------------------------------
// Algebra specs and norms

AlgebraSpec AlgebraSpec::jaffard(double s) {
  if (s < 0.0) throw std::invalid_argument("AlgebraSpec::jaffard: s must be >= 0");
  AlgebraSpec a;
  a.family = Family::jaffard;
  a.s = s;
  return a;
}

AlgebraSpec AlgebraSpec::schur(Weight nu) {
  AlgebraSpec a;
  a.family = Family::schur;
  a.nu = std::move(nu);
  return a;
}

AlgebraSpec AlgebraSpec::bgs(Weight nu) {
  AlgebraSpec a;
  a.family = Family::bgs;
  a.nu = std::move(nu);
  return a;
}

RealMatrix scalarize(const BlockMatrix& A) {
  const Eigen::Index N = A.count();
  RealMatrix M(N, N);
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) M(k, l) = spectral_norm(A.block(k, l));
  return M;
}

BlockMatrix embed_scalar(const RealMatrix& M, const IndexSet& X, Eigen::Index n) {
  if (M.rows() != X.size() || M.cols() != X.size())
    throw std::invalid_argument("embed_scalar: matrix size does not match index set");
  BlockMatrix A(X, n);
  for (Eigen::Index k = 0; k < X.size(); ++k)
    for (Eigen::Index l = 0; l < X.size(); ++l)
      A.block(k, l) = M(k, l) * ComplexMatrix::Identity(n, n);
  return A;
}

namespace {

struct NormResult {
  double value = 0.0;
  Eigen::Index k = 0;
  Eigen::Index l = 0;
};

NormResult jaffard_impl(const RealMatrix& norms, const IndexSet& X, double s) {
  NormResult r;
  for (Eigen::Index k = 0; k < X.size(); ++k)
    for (Eigen::Index l = 0; l < X.size(); ++l) {
      const double v = norms(k, l) * std::pow(1.0 + X.distance(k, l), s);
      if (v > r.value) r = {v, k, l};
    }
  return r;
}

NormResult schur_impl(const RealMatrix& norms, const IndexSet& X, const Weight& nu) {
  const Eigen::Index N = X.size();
  NormResult best;
  // row side: sup_k sum_l ||A_{k,l}|| nu(k-l); column side: sup_l sum_k, with
  // the weight always evaluated at (row index) - (column index)
  for (int side = 0; side < 2; ++side) {
    for (Eigen::Index k = 0; k < N; ++k) {
      std::vector<double> terms(N);
      for (Eigen::Index l = 0; l < N; ++l)
        terms[l] = (side == 0 ? norms(k, l) * weight_between(nu, X, k, l)
                              : norms(l, k) * weight_between(nu, X, l, k));
      const double total = pairwise_sum(terms);
      if (total > best.value) {
        const Eigen::Index arg =
            std::max_element(terms.begin(), terms.end()) - terms.begin();
        best.value = total;
        best.k = (side == 0 ? k : arg);
        best.l = (side == 0 ? arg : k);
      }
    }
  }
  return best;
}

void require_lattice(const IndexSet& X, const char* what) {
  if (X.metric() != IndexSet::Metric::toroidal)
    throw std::invalid_argument(std::string(what) + ": index set must be a toroidal lattice");
  const double L = X.period();
  if (std::nearbyint(L) != L)
    throw std::invalid_argument(std::string(what) + ": lattice period must be an integer");
  for (Eigen::Index k = 0; k < X.size(); ++k)
    for (Eigen::Index i = 0; i < X.dim(); ++i)
      if (std::nearbyint(X.points()(k, i)) != X.points()(k, i))
        throw std::invalid_argument(std::string(what) + ": lattice points must be integers");
  // subgroup closure: differences mod L stay inside the set
  std::set<std::vector<double>> pts;
  for (Eigen::Index k = 0; k < X.size(); ++k)
    pts.insert(to_key(X.points().row(k)));
  for (Eigen::Index k = 0; k < X.size(); ++k)
    for (Eigen::Index l = 0; l < X.size(); ++l) {
      Eigen::VectorXd d = X.points().row(k) - X.points().row(l);
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        d[i] = std::fmod(d[i], L);
        if (d[i] < 0.0) d[i] += L;
      }
      if (pts.find(to_key(d)) == pts.end())
        throw std::invalid_argument(std::string(what) +
                                    ": index set is not closed under lattice differences");
    }
}

NormResult bgs_impl(const RealMatrix& norms, const IndexSet& X, const Weight& nu) {
  require_lattice(X, "bgs_norm");
  const Eigen::Index N = X.size();
  // group pairs by reduced displacement; each offset contributes
  // nu(offset) * sup over pairs at that offset
  struct OffsetMax {
    double norm = 0.0;
    Eigen::Index k = 0, l = 0;
    Eigen::VectorXd offset;
  };
  std::map<std::vector<double>, OffsetMax> by_offset;
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index l = 0; l < N; ++l) {
      Eigen::VectorXd o = X.displacement(k, l);
      auto& slot = by_offset[to_key(o)];
      if (norms(k, l) > slot.norm || slot.offset.size() == 0)
        slot = {norms(k, l), k, l, std::move(o)};
    }
  std::vector<double> terms;
  terms.reserve(by_offset.size());
  NormResult best_term;
  double total_tracker = 0.0;
  NormResult result;
  for (const auto& [key, slot] : by_offset) {
    (void)key;
    const double term = slot.norm * nu.eval(slot.offset);
    terms.push_back(term);
    if (term > total_tracker) {
      total_tracker = term;
      best_term = {term, slot.k, slot.l};
    }
  }
  result.value = pairwise_sum(terms);
  result.k = best_term.k;
  result.l = best_term.l;
  return result;
}

NormResult algebra_impl(const RealMatrix& norms, const IndexSet& X, const AlgebraSpec& spec) {
  switch (spec.family) {
    case AlgebraSpec::Family::jaffard:
      return jaffard_impl(norms, X, spec.s);
    case AlgebraSpec::Family::schur:
      return schur_impl(norms, X, spec.nu);
    case AlgebraSpec::Family::bgs:
      return bgs_impl(norms, X, spec.nu);
  }
  throw std::logic_error("algebra_impl: unknown family");
}

}  // namespace

double jaffard_norm_scalar(const RealMatrix& norms, const IndexSet& X, double s) {
  if (s < 0.0) throw std::invalid_argument("jaffard_norm: s must be >= 0");
  return jaffard_impl(norms, X, s).value;
}

double schur_norm_scalar(const RealMatrix& norms, const IndexSet& X, const Weight& nu) {
  return schur_impl(norms, X, nu).value;
}

double bgs_norm_scalar(const RealMatrix& norms, const IndexSet& X, const Weight& nu) {
  return bgs_impl(norms, X, nu).value;
}

double jaffard_norm(const BlockMatrix& A, double s) {
  return jaffard_norm_scalar(scalarize(A), A.index_set(), s);
}

double schur_norm(const BlockMatrix& A, const Weight& nu) {
  return schur_norm_scalar(scalarize(A), A.index_set(), nu);
}

double bgs_norm(const BlockMatrix& A, const Weight& nu) {
  return bgs_norm_scalar(scalarize(A), A.index_set(), nu);
}

double algebra_norm_scalar(const RealMatrix& norms, const IndexSet& X, const AlgebraSpec& spec) {
  return algebra_impl(norms, X, spec).value;
}

double algebra_norm(const BlockMatrix& A, const AlgebraSpec& spec) {
  return algebra_norm_scalar(scalarize(A), A.index_set(), spec);
}

bool solidity_check(const BlockMatrix& A, const BlockMatrix& B, const AlgebraSpec& spec) {
  if (!A.index_set().same_as(B.index_set()) || A.n() != B.n())
    throw std::invalid_argument("solidity_check: operands live on different index sets");
  const RealMatrix MA = scalarize(A);
  const RealMatrix MB = scalarize(B);
  if (!(MB.array() <= MA.array()).all()) return false;
  const double na = algebra_norm_scalar(MA, A.index_set(), spec);
  const double nb = algebra_norm_scalar(MB, B.index_set(), spec);
  return nb <= na * (1.0 + 1e-12);
}

// ---------------------------------------------------------------------------
// Decay fit

namespace {

std::optional<DecayFit> fit_decay_nothrow(const RealMatrix& norms, const IndexSet& X) {
  // per-bin maximum envelope: bins of width 0.5 in distance, each bin keeps
  // the largest block norm together with the exact distance attaining it
  std::map<long long, std::pair<double, double>> envelope;  // bin -> (dist, norm)
  for (Eigen::Index k = 0; k < X.size(); ++k)
    for (Eigen::Index l = 0; l < X.size(); ++l) {
      const double d = X.distance(k, l);
      const long long bin = static_cast<long long>(std::floor(d / 0.5));
      auto it = envelope.find(bin);
      if (it == envelope.end() || norms(k, l) > it->second.second)
        envelope[bin] = {d, norms(k, l)};
    }
  std::vector<double> xs, ys;
  for (const auto& [bin, dv] : envelope) {
    (void)bin;
    if (dv.second > fit_floor) {
      xs.push_back(std::log1p(dv.first));
      ys.push_back(std::log(dv.second));
    }
  }
  if (xs.size() < 3) return std::nullopt;

  // least squares for y = b - s * x
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  DecayFit fit;
  fit.C = std::exp(intercept);
  fit.s_fit = -slope;
  fit.rms_log_residual = std::sqrt(ss / n);
  fit.pairs_used = static_cast<Eigen::Index>(xs.size());
  return fit;
}

}  // namespace

DecayFit fit_polynomial_decay_scalar(const RealMatrix& norms, const IndexSet& X) {
  const auto fit = fit_decay_nothrow(norms, X);
  if (!fit)
    throw std::invalid_argument(
        "fit_polynomial_decay: need at least 3 distances with norms above the floor");
  return *fit;
}

DecayFit fit_polynomial_decay(const BlockMatrix& A) {
  return fit_polynomial_decay_scalar(scalarize(A), A.index_set());
}

// ---------------------------------------------------------------------------
// Weighted operator norms

double weighted_p_norm(const BlockVector& v, double p, const Weight& omega) {
  const Eigen::Index N = v.count();
  if (p == 0.0) p = kInf;  // sequence-space convention
  if (p == kInf) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < N; ++k)
      m = std::max(m, v.component(k).norm() * weight_at_point(omega, v.index_set(), k));
    return m;
  }
  if (!(p > 0.0)) throw std::invalid_argument("weighted_p_norm: p must be positive");
  std::vector<double> terms(N);
  for (Eigen::Index k = 0; k < N; ++k)
    terms[k] = std::pow(v.component(k).norm() * weight_at_point(omega, v.index_set(), k), p);
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

namespace {

// sup_l sum_k M(k,l) w(k)/w(l)  (columns = p=1; transpose for rows = p=inf)
double weighted_sum_norm(const RealMatrix& M, const std::vector<double>& w, bool columns) {
  const Eigen::Index N = M.rows();
  double best = 0.0;
  for (Eigen::Index j = 0; j < N; ++j) {
    std::vector<double> terms(N);
    for (Eigen::Index i = 0; i < N; ++i)
      terms[i] = (columns ? M(i, j) * w[i] / w[j] : M(j, i) * w[j] / w[i]);
    best = std::max(best, pairwise_sum(terms));
  }
  return best;
}

}  // namespace

OpNormBracket weighted_opnorm(const BlockMatrix& A, double p, const Weight& omega) {
  if (!(p > 0.0)) throw std::invalid_argument("weighted_opnorm: p must be positive");
  const Eigen::Index N = A.count();
  const Eigen::Index n = A.n();
  std::vector<double> w(N);
  for (Eigen::Index k = 0; k < N; ++k) w[k] = weight_at_point(omega, A.index_set(), k);

  if (p == 2.0) {
    ComplexMatrix M = flatten(A);
    for (Eigen::Index k = 0; k < N; ++k) {
      M.middleRows(k * n, n) *= w[k];
      M.middleCols(k * n, n) /= w[k];
    }
    const double v = spectral_norm(M);
    return {v, v};
  }
  if (p == 1.0 || p == kInf) {
    const RealMatrix M = scalarize(A);
    const double v = weighted_sum_norm(M, w, /*columns=*/p == 1.0);
    return {v, v};
  }

  // certified bracket for the remaining p
  const RealMatrix M = scalarize(A);
  OpNormBracket out;
  if (p > 1.0) {
    const double n1 = weighted_sum_norm(M, w, true);
    const double ninf = weighted_sum_norm(M, w, false);
    out.upper = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
  } else {
    // quasi-norm p-subadditivity: sup_l (sum_k (M(k,l) w_k/w_l)^p)^(1/p)
    double best = 0.0;
    for (Eigen::Index l = 0; l < N; ++l) {
      std::vector<double> terms(N);
      for (Eigen::Index k = 0; k < N; ++k) terms[k] = std::pow(M(k, l) * w[k] / w[l], p);
      best = std::max(best, std::pow(pairwise_sum(terms), 1.0 / p));
    }
    out.upper = best;
  }

  RngStream rng(1234, "weighted-opnorm-samples");
  double best = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    BlockVector v(A.index_set(), n);
    for (Eigen::Index k = 0; k < N; ++k)
      for (Eigen::Index i = 0; i < n; ++i) v.component(k)(i) = rng.cnormal();
    const double denom = weighted_p_norm(v, p, omega);
    if (denom == 0.0) continue;
    best = std::max(best, weighted_p_norm(block_apply(A, v), p, omega) / denom);
  }
  out.lower = std::min(best, out.upper);
  return out;
}

// ---------------------------------------------------------------------------
// Reports

LocalizationReport localization_report(const GFrame& T, const GFrame* U, const AlgebraSpec& spec) {
  const BlockMatrix G = (U != nullptr) ? mixed_gram(*U, T) : gram(T);
  const RealMatrix norms = scalarize(G);
  LocalizationReport rep;
  rep.algebra = spec;
  const NormResult r = algebra_impl(norms, G.index_set(), spec);
  rep.norm_value = r.value;
  rep.sup_attained_at = {r.k, r.l};
  if (auto fit = fit_decay_nothrow(norms, G.index_set())) rep.decay_fit = *fit;
  return rep;
}

}  // namespace gflt
