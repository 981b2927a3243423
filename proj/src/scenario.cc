#include "gflt/scenario.hh"

#include "gflt/rng.hh"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace gflt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_line(int line, const std::string& message) {
  throw ScenarioError("line " + std::to_string(line) + ": " + message);
}

double parse_real(const std::string& value, int line, const std::string& key) {
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    fail_line(line, "value of '" + key + "' is not a number: '" + value + "'");
  }
}

Eigen::Index parse_index(const std::string& value, int line, const std::string& key) {
  try {
    size_t used = 0;
    const long long x = std::stoll(value, &used);
    if (used != value.size() || x < 0) throw std::invalid_argument("");
    return Eigen::Index(x);
  } catch (const std::exception&) {
    fail_line(line, "value of '" + key + "' is not a nonnegative integer: '" + value + "'");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string token;
  for (const char c : value) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

double parse_p_value(const std::string& token, int line) {
  if (token == "inf") return kInf;
  const double p = parse_real(token, line, "weights");
  if (p < 0.0) fail_line(line, "sequence exponent p must be positive, 0 (= inf), or inf");
  return p;
}

// "%.17g" round-trips doubles exactly, keeping outputs byte-stable
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_p(double p) { return std::isinf(p) ? "inf" : fmt17(p); }

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {
      "bounds",  "dual",    "gram_factorization", "localization",
      "decay",   "coorbit", "equivalence",        "pairing",
  };
  return names;
}

std::string task_name(TaskKind task) { return task_names()[size_t(task)]; }

TaskKind task_from_name(const std::string& name) {
  const auto& names = task_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return TaskKind(i);
  throw ScenarioError("unknown task '" + name + "'");
}

std::string version_string() { return GFLT_VERSION; }

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::map<std::string, int> seen;  // key -> line, for duplicate detection
  bool has_model = false, has_L = false, has_grid = false, has_count = false, has_n = false;
  bool has_s = false, has_nu = false;
  std::string algebra_name = "jaffard";
  double s_value = 2.0, nu_value = 1.0;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail_line(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail_line(line, "empty key");
    if (value.empty()) fail_line(line, "empty value for '" + key + "'");
    if (const auto [it, inserted] = seen.insert({key, line}); !inserted)
      fail_line(line, "duplicate key '" + key + "' (first on line " + std::to_string(it->second) +
                          ")");

    if (key == "name") {
      sc.name = value;
    } else if (key == "model") {
      has_model = true;
      if (value == "gabor")
        sc.model = ModelKind::gabor;
      else if (value == "synthetic")
        sc.model = ModelKind::synthetic;
      else if (value == "explicit")
        sc.model = ModelKind::explicit_file;
      else
        fail_line(line, "model must be gabor, synthetic, or explicit");
    } else if (key == "L") {
      has_L = true;
      sc.L = parse_index(value, line, key);
    } else if (key == "window") {
      sc.window = value;
    } else if (key == "grid") {
      has_grid = true;
      const auto x = value.find('x');
      const std::string first = (x == std::string::npos) ? value : value.substr(0, x);
      const std::string second = (x == std::string::npos) ? value : value.substr(x + 1);
      sc.grid_x = parse_index(first, line, key);
      sc.grid_w = parse_index(second, line, key);
    } else if (key == "generator") {
      sc.generator = value;
    } else if (key == "count") {
      has_count = true;
      sc.count = parse_index(value, line, key);
    } else if (key == "n") {
      has_n = true;
      sc.n = parse_index(value, line, key);
    } else if (key == "seed") {
      sc.seed = std::uint64_t(parse_index(value, line, key));
    } else if (key == "frame_file") {
      sc.frame_file = value;
    } else if (key == "algebra") {
      if (value != "jaffard" && value != "schur" && value != "bgs")
        fail_line(line, "algebra must be jaffard, schur, or bgs");
      algebra_name = value;
    } else if (key == "s") {
      has_s = true;
      s_value = parse_real(value, line, key);
      if (s_value < 0.0) fail_line(line, "s must be nonnegative");
    } else if (key == "nu_exponent") {
      has_nu = true;
      nu_value = parse_real(value, line, key);
      if (nu_value < 0.0) fail_line(line, "nu_exponent must be nonnegative");
    } else if (key == "weights") {
      sc.weights.clear();
      for (const std::string& token : split_list(value)) {
        const auto colon = token.find(':');
        if (colon == std::string::npos)
          fail_line(line, "weights entries take the form p:exponent");
        WeightSpec w;
        w.p = parse_p_value(token.substr(0, colon), line);
        w.exponent = parse_real(token.substr(colon + 1), line, key);
        if (w.exponent < 0.0) fail_line(line, "weight exponents must be nonnegative");
        sc.weights.push_back(w);
      }
      if (sc.weights.empty()) fail_line(line, "weights list is empty");
    } else if (key == "tasks") {
      sc.tasks.clear();
      for (const std::string& token : split_list(value)) {
        TaskKind t;
        try {
          t = task_from_name(token);
        } catch (const ScenarioError& e) {
          fail_line(line, e.what());
        }
        if (std::find(sc.tasks.begin(), sc.tasks.end(), t) == sc.tasks.end())
          sc.tasks.push_back(t);
      }
      if (sc.tasks.empty()) fail_line(line, "tasks list is empty");
    } else if (key == "output_dir") {
      sc.output_dir = value;
    } else {
      fail_line(line, "unknown key '" + key + "'");
    }
  }

  // cross-field validation
  if (!has_model) throw ScenarioError("missing required key 'model'");
  if (sc.tasks.empty()) throw ScenarioError("missing required key 'tasks'");

  if (algebra_name == "jaffard") {
    if (has_nu) throw ScenarioError("nu_exponent applies to schur/bgs algebras only");
    sc.algebra = AlgebraSpec::jaffard(s_value);
  } else {
    if (has_s) throw ScenarioError("s applies to the jaffard algebra only");
    sc.algebra = algebra_name == "schur" ? AlgebraSpec::schur(Weight::polynomial(nu_value))
                                         : AlgebraSpec::bgs(Weight::polynomial(nu_value));
  }

  if (sc.model == ModelKind::gabor) {
    if (!has_L) throw ScenarioError("gabor model requires L");
    if (!has_grid) throw ScenarioError("gabor model requires grid (e.g. grid = 8x8)");
    if (sc.window != "gaussian") throw ScenarioError("unsupported window '" + sc.window + "'");
    if (sc.L < 4) throw ScenarioError("gabor model requires L >= 4");
    if (sc.L > 256) throw ScenarioError("desk-scale guard: L must be at most 256");
    if (sc.grid_x < 1 || sc.grid_w < 1) throw ScenarioError("grid counts must be positive");
    if (sc.L % sc.grid_x != 0 || sc.L % sc.grid_w != 0)
      throw ScenarioError("grid counts must divide L");
    if (sc.grid_x * sc.grid_w * sc.L > 4096)
      throw ScenarioError("desk-scale guard: |X| * n must be at most 4096");
  } else if (sc.model == ModelKind::synthetic) {
    if (sc.generator != "dense_gaussian")
      throw ScenarioError("unsupported generator '" + sc.generator + "'");
    if (!has_count || !has_n) throw ScenarioError("synthetic model requires count and n");
    if (sc.count < 1 || sc.n < 1) throw ScenarioError("count and n must be positive");
    if (sc.count * sc.n > 4096)
      throw ScenarioError("desk-scale guard: |X| * n must be at most 4096");
    if (!sc.seed) throw ScenarioError("seed required for synthetic models");
  } else {
    if (sc.frame_file.empty()) throw ScenarioError("explicit model requires frame_file");
  }

  const bool has_decay =
      std::find(sc.tasks.begin(), sc.tasks.end(), TaskKind::decay) != sc.tasks.end();
  if (has_decay && sc.model != ModelKind::gabor)
    throw ScenarioError("the decay task requires the gabor model");
  if (has_decay && sc.algebra.family != AlgebraSpec::Family::jaffard)
    throw ScenarioError("the decay task requires the jaffard algebra");
  const bool has_bgs = sc.algebra.family == AlgebraSpec::Family::bgs;
  if (has_bgs && sc.model != ModelKind::gabor)
    throw ScenarioError("the bgs algebra requires a toroidal lattice (gabor model)");
  return sc;
}

void apply_task_filter(Scenario& scenario, const std::vector<std::string>& names) {
  if (names.empty()) return;
  std::vector<TaskKind> filtered;
  for (const std::string& name : names) {
    const TaskKind t = task_from_name(name);
    if (std::find(filtered.begin(), filtered.end(), t) == filtered.end()) filtered.push_back(t);
  }
  scenario.tasks = std::move(filtered);
}

namespace {

GaborGSystem gabor_system_of(const Scenario& sc) {
  GaborGSystem sys;
  sys.L = sc.L;
  const ComplexVector g0 = discrete_gaussian(sc.L);
  sys.window.terms.push_back({g0, g0});
  const Eigen::Index sx = sc.L / sc.grid_x;
  const Eigen::Index sw = sc.L / sc.grid_w;
  for (Eigen::Index i = 0; i < sc.grid_x; ++i)
    for (Eigen::Index j = 0; j < sc.grid_w; ++j) sys.points.push_back({i * sx, j * sw});
  return sys;
}

GFrame synthetic_frame(const Scenario& sc) {
  RngStream rng(*sc.seed, "synthetic-frame");
  std::vector<ComplexMatrix> ops(static_cast<size_t>(sc.count));
  for (auto& T : ops) {
    T.resize(sc.n, sc.n);
    for (Eigen::Index j = 0; j < sc.n; ++j)
      for (Eigen::Index i = 0; i < sc.n; ++i) T(i, j) = rng.cnormal();
    T /= std::sqrt(double(sc.count));
  }
  return GFrame(IndexSet::line(sc.count), std::move(ops));
}

// plain text frame file: first data line "count n", then count*n rows of
// 2n numbers (real imaginary per entry); '#' starts a comment
GFrame explicit_frame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open frame file '" + path + "'");
  std::vector<double> numbers;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream row(raw);
    double x = 0.0;
    while (row >> x) numbers.push_back(x);
    if (!row.eof()) throw ScenarioError("frame file '" + path + "': non-numeric data");
  }
  if (numbers.size() < 2) throw ScenarioError("frame file '" + path + "': missing header");
  const auto count = Eigen::Index(numbers[0]);
  const auto n = Eigen::Index(numbers[1]);
  if (count < 1 || n < 1 || double(count) != numbers[0] || double(n) != numbers[1])
    throw ScenarioError("frame file '" + path + "': header must be 'count n'");
  if (count * n > 4096)
    throw ScenarioError("desk-scale guard: |X| * n must be at most 4096");
  const size_t expected = 2 + size_t(count) * size_t(n) * size_t(n) * 2;
  if (numbers.size() != expected)
    throw ScenarioError("frame file '" + path + "': expected " + std::to_string(expected) +
                        " numbers, found " + std::to_string(numbers.size()));
  std::vector<ComplexMatrix> ops(static_cast<size_t>(count));
  size_t pos = 2;
  for (auto& T : ops) {
    T.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        T(i, j) = cplx(numbers[pos], numbers[pos + 1]);
        pos += 2;
      }
  }
  return GFrame(IndexSet::line(count), std::move(ops));
}

GFrame build_frame(const Scenario& sc) {
  switch (sc.model) {
    case ModelKind::gabor:
      return build_gabor_gsystem(gabor_system_of(sc));
    case ModelKind::synthetic:
      return synthetic_frame(sc);
    case ModelKind::explicit_file:
      return explicit_frame(sc.frame_file);
  }
  throw ScenarioError("unreachable model kind");
}

// shared state across tasks; the dual is computed once on first use
struct RunContext {
  const Scenario& sc;
  std::uint64_t seed;
  GFrame T;
  std::optional<GFrame> Td_;

  const GFrame& dual() {
    if (!Td_) Td_ = canonical_dual(T);
    return *Td_;
  }
};

struct TaskOutput {
  std::string csv;          // complete file contents
  ordered_json extras;      // task-specific summary fields
};

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row.push_back(',');
    row += cells[i];
  }
  row.push_back('\n');
  return row;
}

TaskOutput run_bounds(RunContext& ctx) {
  const FrameBounds fb = frame_bounds(ctx.T);
  TaskOutput out;
  out.csv = csv_row({"A", "B", "is_frame"});
  out.csv += csv_row({fmt17(fb.lower), fmt17(fb.upper), fb.is_frame ? "1" : "0"});
  out.extras["A"] = fb.lower;
  out.extras["B"] = fb.upper;
  return out;
}

TaskOutput run_dual(RunContext& ctx) {
  const FrameBounds db = frame_bounds(ctx.dual());
  const DualPairCheck chk = is_dual_pair(ctx.T, ctx.dual(), 1e-8);
  TaskOutput out;
  out.csv = csv_row({"A_dual", "B_dual", "duality_residual", "is_dual_pair"});
  out.csv += csv_row({fmt17(db.lower), fmt17(db.upper), fmt17(chk.residual), chk.ok ? "1" : "0"});
  out.extras["duality_residual"] = chk.residual;
  return out;
}

TaskOutput run_gram_factorization(RunContext& ctx) {
  const GramFactorizationReport rep = verify_gram_factorization(ctx.T);
  TaskOutput out;
  out.csv = csv_row({"residual_dual_gram", "residual_mixed", "projection_defect"});
  out.csv += csv_row({fmt17(rep.residual_dual_gram), fmt17(rep.residual_mixed),
                      fmt17(rep.projection_defect)});
  out.extras["residual_dual_gram"] = rep.residual_dual_gram;
  out.extras["residual_mixed"] = rep.residual_mixed;
  return out;
}

std::vector<std::string> report_cells(const std::string& label, const LocalizationReport& rep) {
  std::vector<std::string> cells{label, fmt17(rep.norm_value),
                                 std::to_string(rep.sup_attained_at.first),
                                 std::to_string(rep.sup_attained_at.second)};
  if (rep.decay_fit) {
    cells.push_back(fmt17(rep.decay_fit->C));
    cells.push_back(fmt17(rep.decay_fit->s_fit));
    cells.push_back(fmt17(rep.decay_fit->rms_log_residual));
    cells.push_back(std::to_string(rep.decay_fit->pairs_used));
  } else {
    cells.insert(cells.end(), {"", "", "", ""});
  }
  return cells;
}

TaskOutput run_localization(RunContext& ctx) {
  const LocalizationReport primal = localization_report(ctx.T, nullptr, ctx.sc.algebra);
  const LocalizationReport mixed = localization_report(ctx.T, &ctx.dual(), ctx.sc.algebra);
  const LocalizationReport dual = localization_report(ctx.dual(), nullptr, ctx.sc.algebra);
  TaskOutput out;
  out.csv = csv_row({"matrix", "norm_value", "sup_row", "sup_col", "fit_C", "fit_s_fit",
                     "fit_rms_log_residual", "fit_pairs_used"});
  out.csv += csv_row(report_cells("primal", primal));
  out.csv += csv_row(report_cells("mixed", mixed));
  out.csv += csv_row(report_cells("dual", dual));
  out.extras["primal_norm"] = primal.norm_value;
  out.extras["mixed_norm"] = mixed.norm_value;
  out.extras["dual_norm"] = dual.norm_value;
  return out;
}

std::vector<std::string> decay_cells(const std::string& label, double norm,
                                     const std::optional<DecayFit>& fit) {
  std::vector<std::string> cells{label, fmt17(norm)};
  if (fit) {
    cells.push_back(fmt17(fit->C));
    cells.push_back(fmt17(fit->s_fit));
    cells.push_back(fmt17(fit->rms_log_residual));
    cells.push_back(std::to_string(fit->pairs_used));
  } else {
    cells.insert(cells.end(), {"", "", "", ""});
  }
  return cells;
}

TaskOutput run_decay(RunContext& ctx) {
  const DecayTheoremReport rep = verify_decay_theorem(gabor_system_of(ctx.sc), ctx.sc.algebra.s);
  TaskOutput out;
  out.csv = csv_row({"matrix", "jaffard_norm", "fit_C", "fit_s_fit", "fit_rms_log_residual",
                     "fit_pairs_used"});
  out.csv += csv_row(decay_cells("primal", rep.C1, rep.fit_primal));
  out.csv += csv_row(decay_cells("mixed", rep.C2, rep.fit_mixed));
  out.csv += csv_row(decay_cells("dual", rep.C3, rep.fit_dual));
  out.extras["A"] = rep.bounds.lower;
  out.extras["B"] = rep.bounds.upper;
  out.extras["dual_exponent_ok"] = rep.dual_exponent_ok;
  out.extras["decay_slack"] = rep.decay_slack;
  out.extras["max_points_per_unit_ball"] = rep.max_points_per_unit_ball;
  return out;
}

ComplexVector seeded_vector(Eigen::Index n, RngStream& rng) {
  ComplexVector f(n);
  for (Eigen::Index i = 0; i < n; ++i) f(i) = rng.cnormal();
  return f;
}

TaskOutput run_coorbit(RunContext& ctx) {
  RngStream rng(ctx.seed, "coorbit-sample");
  const ComplexVector f = seeded_vector(ctx.T.n(), rng);
  const std::vector<Eigen::Index> order = centroid_order(ctx.T.index_set());
  TaskOutput out;
  out.csv = csv_row(
      {"p", "omega_exponent", "coorbit_norm", "reconstruction_final_error", "profile_steps"});
  for (const WeightSpec& w : ctx.sc.weights) {
    const SeqSpaceSpec spec{w.p, Weight::polynomial(w.exponent)};
    const double norm = coorbit_norm(f, ctx.dual(), spec);
    const CoorbitProfile prof = reconstruction_profile(ctx.T, ctx.dual(), f, spec, order);
    out.csv += csv_row({fmt_p(w.p), fmt17(w.exponent), fmt17(norm), fmt17(prof.final_error),
                        std::to_string(prof.partial_norm_errors.size())});
  }
  out.extras["samples"] = 1;
  return out;
}

// comparison frame: every operator composed with one cyclic coordinate shift
GFrame permuted_frame(const GFrame& T) {
  const Eigen::Index n = T.n();
  ComplexMatrix P = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) P((i + 1) % n, i) = 1.0;
  std::vector<ComplexMatrix> ops;
  ops.reserve(size_t(T.count()));
  for (Eigen::Index k = 0; k < T.count(); ++k) ops.push_back(T.op(k) * P);
  return GFrame(T.index_set(), std::move(ops));
}

TaskOutput run_equivalence(RunContext& ctx) {
  const GFrame U = permuted_frame(ctx.T);
  const GFrame Ud = canonical_dual(U);
  TaskOutput out;
  out.csv = csv_row({"p", "omega_exponent", "max_ratio_forward", "max_ratio_backward",
                     "bound_forward", "bound_backward", "within_bounds"});
  bool all_within = true;
  for (const WeightSpec& w : ctx.sc.weights) {
    const SeqSpaceSpec spec{w.p, Weight::polynomial(w.exponent)};
    const NormEquivalenceReport rep =
        norm_equivalence_check(ctx.dual(), ctx.T, Ud, U, spec, 200);
    const bool within = rep.max_ratio_forward <= rep.bound_forward + 1e-9 &&
                        rep.max_ratio_backward <= rep.bound_backward + 1e-9;
    all_within = all_within && within;
    out.csv += csv_row({fmt_p(w.p), fmt17(w.exponent), fmt17(rep.max_ratio_forward),
                        fmt17(rep.max_ratio_backward), fmt17(rep.bound_forward),
                        fmt17(rep.bound_backward), within ? "1" : "0"});
  }
  out.extras["within_bounds"] = all_within;
  if (!all_within) throw std::runtime_error("sampled ratio exceeded its certified bound");
  return out;
}

TaskOutput run_pairing(RunContext& ctx) {
  RngStream rng(ctx.seed, "pairing-draws");
  const Weight omega = Weight::polynomial(ctx.sc.weights.front().exponent);
  const Weight omega_dual = dual_weight(omega);
  const int draws = 100;
  double max_error = 0.0;
  bool hoelder_1_inf = true, hoelder_2_2 = true;
  for (int trial = 0; trial < draws; ++trial) {
    const ComplexVector f = seeded_vector(ctx.T.n(), rng);
    const ComplexVector g = seeded_vector(ctx.T.n(), rng);
    const cplx beta = duality_pairing(f, g, ctx.T, ctx.dual());
    max_error = std::max(max_error, std::abs(beta - f.dot(g)));
    const double b1 = coorbit_norm(f, ctx.dual(), {1.0, omega}) *
                      coorbit_norm(g, ctx.T, {kInf, omega_dual});
    const double b2 = coorbit_norm(f, ctx.dual(), {2.0, omega}) *
                      coorbit_norm(g, ctx.T, {2.0, omega_dual});
    hoelder_1_inf = hoelder_1_inf && std::abs(beta) <= b1 * (1.0 + 1e-12);
    hoelder_2_2 = hoelder_2_2 && std::abs(beta) <= b2 * (1.0 + 1e-12);
  }
  TaskOutput out;
  out.csv = csv_row({"draws", "max_pairing_error", "hoelder_1_inf_ok", "hoelder_2_2_ok"});
  out.csv += csv_row({std::to_string(draws), fmt17(max_error), hoelder_1_inf ? "1" : "0",
                      hoelder_2_2 ? "1" : "0"});
  out.extras["max_pairing_error"] = max_error;
  return out;
}

TaskOutput run_task(RunContext& ctx, TaskKind task) {
  switch (task) {
    case TaskKind::bounds:
      return run_bounds(ctx);
    case TaskKind::dual:
      return run_dual(ctx);
    case TaskKind::gram_factorization:
      return run_gram_factorization(ctx);
    case TaskKind::localization:
      return run_localization(ctx);
    case TaskKind::decay:
      return run_decay(ctx);
    case TaskKind::coorbit:
      return run_coorbit(ctx);
    case TaskKind::equivalence:
      return run_equivalence(ctx);
    case TaskKind::pairing:
      return run_pairing(ctx);
  }
  throw std::runtime_error("unreachable task kind");
}

ordered_json scenario_echo(const Scenario& sc) {
  ordered_json echo;
  echo["name"] = sc.name;
  switch (sc.model) {
    case ModelKind::gabor:
      echo["model"] = "gabor";
      echo["L"] = sc.L;
      echo["window"] = sc.window;
      echo["grid"] = std::to_string(sc.grid_x) + "x" + std::to_string(sc.grid_w);
      break;
    case ModelKind::synthetic:
      echo["model"] = "synthetic";
      echo["generator"] = sc.generator;
      echo["count"] = sc.count;
      echo["n"] = sc.n;
      break;
    case ModelKind::explicit_file:
      echo["model"] = "explicit";
      echo["frame_file"] = sc.frame_file;
      break;
  }
  if (sc.seed) echo["seed"] = *sc.seed;
  switch (sc.algebra.family) {
    case AlgebraSpec::Family::jaffard:
      echo["algebra"] = "jaffard";
      echo["s"] = sc.algebra.s;
      break;
    case AlgebraSpec::Family::schur:
      echo["algebra"] = "schur";
      echo["nu_exponent"] = sc.algebra.nu.exponent();
      break;
    case AlgebraSpec::Family::bgs:
      echo["algebra"] = "bgs";
      echo["nu_exponent"] = sc.algebra.nu.exponent();
      break;
  }
  ordered_json weights = ordered_json::array();
  for (const WeightSpec& w : sc.weights) {
    ordered_json entry;
    if (std::isinf(w.p))
      entry["p"] = "inf";
    else
      entry["p"] = w.p;
    entry["exponent"] = w.exponent;
    weights.push_back(entry);
  }
  echo["weights"] = weights;
  ordered_json tasks = ordered_json::array();
  for (const TaskKind t : sc.tasks) tasks.push_back(task_name(t));
  echo["tasks"] = tasks;
  return echo;
}

}  // namespace

int run_scenario(const Scenario& scenario, bool quiet, std::ostream& log) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(scenario.output_dir, ec);
  if (ec)
    throw ScenarioError("cannot create output directory '" + scenario.output_dir +
                        "': " + ec.message());

  RunContext ctx{scenario, scenario.seed.value_or(0), build_frame(scenario), std::nullopt};

  ordered_json summary;
  summary["name"] = scenario.name;
  summary["version"] = version_string();
  summary["scenario"] = scenario_echo(scenario);
  summary["tasks"] = ordered_json::object();

  std::string first_failure;
  for (const TaskKind task : scenario.tasks) {
    const std::string name = task_name(task);
    const auto start = std::chrono::steady_clock::now();
    ordered_json entry;
    try {
      TaskOutput out = run_task(ctx, task);
      const fs::path csv_path = fs::path(scenario.output_dir) / (name + ".csv");
      std::ofstream csv(csv_path, std::ios::binary);
      if (!csv) throw ScenarioError("cannot write '" + csv_path.string() + "'");
      csv << out.csv;
      entry["status"] = "ok";
      entry["csv"] = name + ".csv";
      for (auto& [key, value] : out.extras.items()) entry[key] = value;
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (!quiet)
        log << "task " << name << ": ok (" << fmt17(elapsed.count()) << " s)\n";
    } catch (const ScenarioError&) {
      throw;  // configuration-level problems abort the run
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      if (first_failure.empty()) first_failure = name;
      if (!quiet) log << "task " << name << ": FAILED: " << e.what() << "\n";
    }
    summary["tasks"][name] = entry;
  }

  const fs::path json_path = fs::path(scenario.output_dir) / "summary.json";
  std::ofstream json_out(json_path, std::ios::binary);
  if (!json_out) throw ScenarioError("cannot write '" + json_path.string() + "'");
  json_out << summary.dump(2) << "\n";

  if (!first_failure.empty()) {
    if (!quiet) log << "failed task: " << first_failure << "\n";
    return 3;
  }
  return 0;
}

}  // namespace gflt
