#include "toravg/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "toravg/action_periods.hpp"
#include "toravg/averaging.hpp"
#include "toravg/decomposition.hpp"
#include "toravg/deformation.hpp"
#include "toravg/errors.hpp"
#include "toravg/field_calculus.hpp"
#include "toravg/field_io.hpp"
#include "toravg/random_fields.hpp"
#include "toravg/verification.hpp"

namespace toravg {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

// "key = value"; returns false when the line has no '='.
bool split_assignment(const std::string& line, std::string& key, std::string& value) {
  const auto pos = line.find('=');
  if (pos == std::string::npos) return false;
  key = strip(line.substr(0, pos));
  value = strip(line.substr(pos + 1));
  return !key.empty();
}

std::vector<double> parse_number_list(const std::string& text, int line_no) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("expected a number, got '" + item + "'", line_no, 1);
    }
  }
  if (out.empty()) throw ParseError("expected a number list", line_no, 1);
  return out;
}

Expression::Ptr parse_expr_at(const std::string& text, int dim, int line_no) {
  try {
    return parse_expression(text, dim);
  } catch (const ParseError& e) {
    // Re-anchor the error at the scenario line.
    throw ParseError(std::string(e.what()) + " (column " + std::to_string(e.column()) +
                         " of the expression)",
                     line_no, e.column());
  }
}

}  // namespace

const ScenarioFile::ScalarDef* ScenarioFile::find_scalar(const std::string& name) const {
  for (const auto& s : scalars)
    if (s.name == name) return &s;
  return nullptr;
}

const ScenarioFile::VectorDef* ScenarioFile::find_vector(const std::string& name) const {
  for (const auto& v : vectors)
    if (v.name == name) return &v;
  return nullptr;
}

TorusBox ScenarioFile::box() const {
  return TorusBox::make(space.d, space.lo, space.hi, space.truncation, space.grid_points);
}

TorusBox ScenarioFile::safe_box() const { return box().shrunk(space.safe_shrink); }

ScenarioFile parse_scenario(const std::string& text) {
  ScenarioFile file;
  file.source_text = text;
  bool have_space = false;

  std::vector<std::string> lines;
  {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(strip_comment(line));
  }

  std::size_t i = 0;
  auto next_line = [&](int& line_no) -> std::string {
    while (i < lines.size()) {
      line_no = static_cast<int>(i) + 1;
      std::string s = strip(lines[i]);
      ++i;
      if (!s.empty()) return s;
    }
    line_no = static_cast<int>(lines.size()) + 1;
    return {};
  };

  auto require_space = [&](int line_no) {
    if (!have_space)
      throw ParseError("the space block must precede definitions and tasks", line_no, 1);
  };

  int line_no = 0;
  for (std::string line = next_line(line_no); !line.empty(); line = next_line(line_no)) {
    if (line == "space {") {
      if (have_space) throw ParseError("duplicate space block", line_no, 1);
      std::map<std::string, std::string> kv;
      for (std::string inner = next_line(line_no); true; inner = next_line(line_no)) {
        if (inner.empty()) throw ParseError("unterminated space block", line_no, 1);
        if (inner == "}") break;
        std::string key, value;
        if (!split_assignment(inner, key, value))
          throw ParseError("expected 'key = value' in space block", line_no, 1);
        kv[key] = value;
      }
      auto need = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end())
          throw ParseError(std::string("space block is missing '") + key + "'", line_no, 1);
        return it->second;
      };
      file.space.d = static_cast<int>(parse_number_list(need("d"), line_no)[0]);
      file.space.lo = parse_number_list(need("lo"), line_no);
      file.space.hi = parse_number_list(need("hi"), line_no);
      file.space.truncation = static_cast<int>(parse_number_list(need("K"), line_no)[0]);
      file.space.grid_points = static_cast<int>(parse_number_list(need("N"), line_no)[0]);
      if (kv.count("safe_shrink"))
        file.space.safe_shrink = parse_number_list(kv["safe_shrink"], line_no)[0];
      if (static_cast<int>(file.space.lo.size()) == 1 && file.space.d > 1)
        file.space.lo.assign(file.space.d, file.space.lo[0]);
      if (static_cast<int>(file.space.hi.size()) == 1 && file.space.d > 1)
        file.space.hi.assign(file.space.d, file.space.hi[0]);
      try {
        (void)file.box();
        (void)file.safe_box();
      } catch (const Error& e) {
        throw ParseError(std::string("invalid space block: ") + e.what(), line_no, 1);
      }
      have_space = true;
      continue;
    }

    if (line.rfind("scalar ", 0) == 0) {
      require_space(line_no);
      std::string key, value;
      if (!split_assignment(line.substr(7), key, value) || value.empty())
        throw ParseError("expected 'scalar NAME = expression'", line_no, 1);
      if (file.find_scalar(key) || file.find_vector(key))
        throw ParseError("duplicate definition of '" + key + "'", line_no, 1);
      ScenarioFile::ScalarDef def;
      def.name = key;
      def.text = value;
      def.expr = parse_expr_at(value, file.space.d, line_no);
      file.scalars.push_back(std::move(def));
      continue;
    }

    if (line.rfind("vector ", 0) == 0) {
      require_space(line_no);
      std::string header = strip(line.substr(7));
      if (header.empty() || header.back() != '{')
        throw ParseError("expected 'vector NAME {'", line_no, 1);
      const std::string name = strip(header.substr(0, header.size() - 1));
      if (name.empty()) throw ParseError("vector definition needs a name", line_no, 1);
      if (file.find_scalar(name) || file.find_vector(name))
        throw ParseError("duplicate definition of '" + name + "'", line_no, 1);

      ScenarioFile::VectorDef def;
      def.name = name;
      def.angle_text.assign(file.space.d, "0");
      def.action_text.assign(file.space.d, "0");
      for (std::string inner = next_line(line_no); true; inner = next_line(line_no)) {
        if (inner.empty()) throw ParseError("unterminated vector block", line_no, 1);
        if (inner == "}") break;
        std::string key, value;
        if (!split_assignment(inner, key, value))
          throw ParseError("expected 'angle<j> = expr' or 'action<j> = expr'", line_no, 1);
        int axis = 0;
        std::vector<std::string>* target = nullptr;
        if (key.rfind("angle", 0) == 0) {
          axis = std::atoi(key.c_str() + 5);
          target = &def.angle_text;
        } else if (key.rfind("action", 0) == 0) {
          axis = std::atoi(key.c_str() + 6);
          target = &def.action_text;
        }
        if (!target || axis < 1 || axis > file.space.d)
          throw ParseError("unknown vector component '" + key + "'", line_no, 1);
        (*target)[axis - 1] = value;
      }
      for (int j = 0; j < file.space.d; ++j) {
        def.angle.push_back(parse_expr_at(def.angle_text[j], file.space.d, line_no));
        def.action.push_back(parse_expr_at(def.action_text[j], file.space.d, line_no));
      }
      file.vectors.push_back(std::move(def));
      continue;
    }

    if (line.rfind("task ", 0) == 0) {
      require_space(line_no);
      std::string header = strip(line.substr(5));
      if (header.empty() || header.back() != '{')
        throw ParseError("expected 'task KIND {'", line_no, 1);
      ScenarioFile::TaskDef task;
      task.kind = strip(header.substr(0, header.size() - 1));
      task.line = line_no;
      bool known = false;
      for (const auto& [kind, desc] : task_kinds()) known = known || kind == task.kind;
      if (!known) throw ParseError("unknown task kind '" + task.kind + "'", line_no, 1);

      for (std::string inner = next_line(line_no); true; inner = next_line(line_no)) {
        if (inner.empty()) throw ParseError("unterminated task block", line_no, 1);
        if (inner == "}") break;
        std::string key, value;
        if (!split_assignment(inner, key, value))
          throw ParseError("expected 'key = value' in task block", line_no, 1);
        task.params[key] = value;
      }

      // Referenced names must already be defined.
      for (const char* key : {"input", "base", "hamiltonian", "generator", "potential_dg"}) {
        auto it = task.params.find(key);
        if (it != task.params.end() && !file.find_scalar(it->second) &&
            !file.find_vector(it->second))
          throw ParseError("task references undefined name '" + it->second + "'",
                           task.line, 1);
      }
      file.tasks.push_back(std::move(task));
      continue;
    }

    throw ParseError("unrecognized directive '" + line + "'", line_no, 1);
  }

  if (!have_space) throw ParseError("scenario has no space block", 1, 1);
  return file;
}

ScenarioFile parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

// ---------------------------------------------------------------------------
// Execution

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

struct TaskContext {
  const ScenarioFile& file;
  TorusBox box;
  TorusBox safe;
  RunOptions options;
};

double param_double(const ScenarioFile::TaskDef& task, const std::string& key,
                    double fallback) {
  auto it = task.params.find(key);
  if (it == task.params.end()) return fallback;
  return parse_number_list(it->second, task.line)[0];
}

std::vector<double> param_list(const ScenarioFile::TaskDef& task, const std::string& key,
                               std::vector<double> fallback) {
  auto it = task.params.find(key);
  if (it == task.params.end()) return fallback;
  return parse_number_list(it->second, task.line);
}

std::string param_string(const ScenarioFile::TaskDef& task, const std::string& key,
                         const std::string& fallback = {}) {
  auto it = task.params.find(key);
  return it == task.params.end() ? fallback : it->second;
}

ScalarField compile_scalar(const TaskContext& ctx, const ScenarioFile::ScalarDef& def,
                           double eps, double* tail = nullptr) {
  CompiledField c = compile_field(*def.expr, ctx.box, eps);
  if (tail) *tail = std::max(*tail, c.relative_tail_mass);
  return std::move(c.field);
}

VectorField compile_vector(const TaskContext& ctx, const ScenarioFile::VectorDef& def,
                           double eps, double* tail = nullptr) {
  std::vector<ScalarField> an, ac;
  for (int j = 0; j < ctx.box.dim(); ++j) {
    CompiledField a = compile_field(*def.angle[j], ctx.box, eps);
    CompiledField b = compile_field(*def.action[j], ctx.box, eps);
    if (tail) *tail = std::max({*tail, a.relative_tail_mass, b.relative_tail_mass});
    an.push_back(std::move(a.field));
    ac.push_back(std::move(b.field));
  }
  return VectorField(std::move(an), std::move(ac));
}

// Generator family from either `generator = <vector>` or
// `hamiltonian = <scalar>` (the expressions may use eps).
TimeDepVectorField task_generator(const TaskContext& ctx,
                                  const ScenarioFile::TaskDef& task, double eps_max) {
  const std::string ham = param_string(task, "hamiltonian");
  const std::string gen = param_string(task, "generator");
  if (!ham.empty()) {
    const auto* def = ctx.file.find_scalar(ham);
    if (!def)
      throw ParseError("task needs a scalar named '" + ham + "'", task.line, 1);
    return TimeDepVectorField(
        ctx.box,
        [ctx, def](double eps) { return hamiltonian_vf(compile_scalar(ctx, *def, eps)); },
        eps_max, /*symplectic=*/true);
  }
  if (!gen.empty()) {
    const auto* def = ctx.file.find_vector(gen);
    if (!def)
      throw ParseError("task needs a vector named '" + gen + "'", task.line, 1);
    return TimeDepVectorField(
        ctx.box,
        [ctx, def](double eps) { return compile_vector(ctx, *def, eps, nullptr); },
        eps_max, /*symplectic=*/true);
  }
  throw ParseError("task needs 'hamiltonian = <scalar>' or 'generator = <vector>'",
                   task.line, 1);
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back(json{{"name", c.name}, {"value", c.value}, {"tol", c.tol},
                       {"pass", c.pass}});
  return out;
}

struct TaskChecks {
  std::vector<CheckResult> checks;
  json metrics = json::object();

  void add(const std::string& name, double value, double tol) {
    checks.push_back(CheckResult{name, value, tol, value < tol});
  }
  void add_exact(const std::string& name, double value) {
    checks.push_back(CheckResult{name, value, 0.0, value == 0.0});
  }
  void add_bool(const std::string& name, bool ok) {
    checks.push_back(CheckResult{name, ok ? 0.0 : 1.0, 0.0, ok});
  }
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
  }
};

TaskChecks run_average_task(const TaskContext& ctx, const ScenarioFile::TaskDef& task) {
  TaskChecks out;
  const double tol = param_double(task, "tol", 1e-12) * ctx.options.tol_scale;
  const std::string input = param_string(task, "input");
  double tail = 0.0, quad = 0.0, invariance = 0.0;

  if (const auto* sdef = ctx.file.find_scalar(input)) {
    const ScalarField f = compile_scalar(ctx, *sdef, 0.0, &tail);
    quad = sup_distance(vertical_average(f), vertical_average_by_quadrature(f));
    invariance = sup_distance(f, vertical_average(f));
  } else if (const auto* vdef = ctx.file.find_vector(input)) {
    const VectorField x = compile_vector(ctx, *vdef, 0.0, &tail);
    quad = sup_distance(vertical_average(x), vertical_average_by_quadrature(x));
    invariance = sup_distance(x, vertical_average(x));
  } else {
    throw ParseError("average task needs 'input = <field>'", task.line, 1);
  }

  out.metrics["invariance_defect"] = invariance;
  out.metrics["truncation_tail"] = tail;
  out.add("vs quadrature oracle", quad, tol);
  return out;
}

TaskChecks run_decompose_task(const TaskContext& ctx, const ScenarioFile::TaskDef& task) {
  TaskChecks out;
  const double tol = param_double(task, "tol", 1e-8) * ctx.options.tol_scale;
  const std::string input = param_string(task, "input");
  const auto* vdef = ctx.file.find_vector(input);
  if (!vdef) throw ParseError("decompose task needs 'input = <vector>'", task.line, 1);

  double tail = 0.0;
  const VectorField x = compile_vector(ctx, *vdef, 0.0, &tail);
  const auto split = decompose_symplectic(x);

  VectorField recon = hamiltonian_vf(split.hamiltonian);
  recon += split.lift;
  out.metrics["truncation_tail"] = tail;
  out.metrics["hamiltonian_norm"] = split.hamiltonian.sup_norm();
  out.metrics["lift_norm"] = split.lift.sup_norm();
  out.add("reconstruction residual", sup_distance(recon, x), tol);
  out.add_exact("<A> = 0", vertical_average(split.hamiltonian).sup_norm());
  out.add_bool("X2 is a lift", is_lift(split.lift).has_value());
  out.add("omega(X2) closed", closedness_defect(omega_flat(split.lift)), 1e-8 * ctx.options.tol_scale);

  if (param_string(task, "emit_fields") == "true") {
    out.metrics["fields"] =
        json{{"hamiltonian", json::parse(to_json_string(split.hamiltonian))},
             {"lift", json::parse(to_json_string(split.lift))}};
  }
  return out;
}

TaskChecks run_flow_decompose_task(const TaskContext& ctx,
                                   const ScenarioFile::TaskDef& task) {
  TaskChecks out;
  const double tol = param_double(task, "tol", 1e-6) * ctx.options.tol_scale;
  const auto eps_list = param_list(task, "eps", {0.25});
  const int samples = static_cast<int>(param_double(task, "samples", 25));
  const double eps_max = *std::max_element(eps_list.begin(), eps_list.end());

  const TimeDepVectorField x = task_generator(ctx, task, eps_max);
  const FlowDecomposition dec = decompose_flow(x, ctx.safe);

  RandomFieldSampler sampler(ctx.options.seed);
  const auto points = sampler.phase_points(ctx.box, samples, 0.4);

  double recomposition = 0.0, g_avg = 0.0;
  json per_eps = json::array();
  for (double eps : eps_list) {
    const double r = recomposition_residual(x, dec, eps, points);
    const double a = vertical_average(dec.g.at(eps)).sup_norm();
    recomposition = std::max(recomposition, r);
    g_avg = std::max(g_avg, a);
    per_eps.push_back(json{{"eps", eps}, {"recomposition", r}});
  }
  out.metrics["per_eps"] = per_eps;
  out.add("recomposition residual", recomposition, tol);
  out.add_exact("<G> = 0", g_avg);
  return out;
}

TaskChecks run_normal_form_task(const TaskContext& ctx, const ScenarioFile::TaskDef& task) {
  TaskChecks out;
  const double tol = param_double(task, "tol", 1e-5) * ctx.options.tol_scale;
  const double tol_angle = param_double(task, "tol_angle", 1e-7) * ctx.options.tol_scale;
  const auto eps_list = param_list(task, "eps", {0.25});
  const int samples = static_cast<int>(param_double(task, "samples", 25));
  const double eps_max = *std::max_element(eps_list.begin(), eps_list.end());

  const std::string base_name = param_string(task, "base");
  const auto* bdef = ctx.file.find_scalar(base_name);
  if (!bdef) throw ParseError("normal-form task needs 'base = <scalar>'", task.line, 1);

  const TimeDepVectorField gen = task_generator(ctx, task, eps_max);
  const ScalarFamily base(
      ctx.box, [ctx, bdef](double eps) { return compile_scalar(ctx, *bdef, eps); },
      eps_max);
  const DeformationScenario scenario = DeformationScenario::make(base, gen, ctx.safe);

  RandomFieldSampler sampler(ctx.options.seed);
  const auto points = sampler.phase_points(ctx.box, samples, 0.4);

  double residual = 0.0, angle_indep = 0.0, g_avg = 0.0;
  json per_eps = json::array();
  for (double eps : eps_list) {
    const NormalFormResult nf = normal_form(scenario, eps);
    const double r = normal_form_residual(scenario, eps, nf, points);
    const double ai = sup_distance(nf.i_nf, vertical_average(nf.i_nf));
    residual = std::max(residual, r);
    angle_indep = std::max(angle_indep, ai);
    g_avg = std::max(g_avg, vertical_average(nf.g).sup_norm());
    per_eps.push_back(json{{"eps", eps}, {"residual", r}, {"angle_defect", ai}});
  }
  out.metrics["per_eps"] = per_eps;
  out.add("normal-form residual", residual, tol);
  out.add("I_nf angle-independence", angle_indep, tol_angle);
  out.add_exact("<G> = 0", g_avg);
  return out;
}

TaskChecks run_verify_periods_task(const TaskContext& ctx,
                                   const ScenarioFile::TaskDef& task) {
  TaskChecks out;
  const double tol = param_double(task, "tol", 1e-8) * ctx.options.tol_scale;
  const int base_points = static_cast<int>(param_double(task, "base_points", 25));
  const int d = ctx.box.dim();

  SymplecticPotential lambda = SymplecticPotential::canonical(ctx.box);
  const std::string dg_name = param_string(task, "potential_dg");
  const auto shifts = param_list(task, "shift", std::vector<double>(d, 0.0));
  if (!dg_name.empty()) {
    const auto* gdef = ctx.file.find_scalar(dg_name);
    if (!gdef)
      throw ParseError("verify-periods: no scalar named '" + dg_name + "'", task.line, 1);
    lambda = SymplecticPotential::shifted(ctx.box, compile_scalar(ctx, *gdef, 0.0), shifts);
  } else {
    lambda = SymplecticPotential::shifted(
        ctx.box, ScalarField::zeros(ctx.box), shifts);
  }

  RandomFieldSampler sampler(ctx.options.seed);
  const int per_axis = (d == 1) ? base_points
                                : std::max(2, static_cast<int>(std::sqrt(base_points)));
  std::vector<PhasePoint> samples;
  int total = 1;
  for (int j = 0; j < d; ++j) total *= per_axis;
  for (int b = 0; b < total; ++b) {
    PhasePoint p;
    p.theta.resize(d);
    p.action.resize(d);
    int rem = b;
    for (int j = 0; j < d; ++j) {
      const double frac = (rem % per_axis + 1.0) / (per_axis + 1.0);
      rem /= per_axis;
      p.action[j] =
          ctx.box.action_lo()[j] + frac * (ctx.box.action_hi()[j] - ctx.box.action_lo()[j]);
      p.theta[j] = sampler.uniform(0.0, 1.0);
    }
    samples.push_back(std::move(p));
  }

  double periodicity = 0.0;
  bool winding_ok = true;
  double min_det = std::numeric_limits<double>::infinity();
  std::vector<VectorField> sections;
  for (int j = 0; j < d; ++j) {
    const ScalarField xi = action_function(lambda, CycleFamily::coordinate(ctx.box, j));
    sections.push_back(lattice_section(xi));
    periodicity = std::max(periodicity, verify_one_periodic(sections.back(), samples));
    const auto winding = winding_numbers(sections.back(), samples.front());
    for (int a = 0; a < d; ++a)
      winding_ok = winding_ok && (winding[a] == (a == j ? 1 : 0));
  }
  for (int g = 0; g < ctx.box.n_grid(); ++g) {
    Eigen::MatrixXd m(d, d);
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a)
        m(a, j) = sections[j].angle_comp(a).mode(ctx.box.zero_mode())[g].real();
    min_det = std::min(min_det, std::fabs(m.determinant()));
  }

  out.metrics["min_independence_det"] = min_det;
  out.add("1-periodicity defect", periodicity, tol);
  out.add_bool("winding matrix = identity", winding_ok);
  out.add_bool("independence det >= 0.5", min_det >= 0.5);
  return out;
}

TaskChecks run_property_suite_task(const TaskContext& ctx,
                                   const ScenarioFile::TaskDef& task) {
  TaskChecks out;
  const std::string suite = param_string(task, "suite");
  const int count = static_cast<int>(param_double(task, "count", 0));
  const SuiteResult result =
      run_suite_by_name(suite, ctx.options.seed, count, ctx.options.tol_scale);
  out.checks = result.checks;
  out.metrics["suite"] = result.suite;
  out.metrics["seed"] = result.seed;
  return out;
}

}  // namespace

RunOutcome run_scenario(const ScenarioFile& file, const RunOptions& options) {
  TaskContext ctx{file, file.box(), file.safe_box(), options};

  json report;
  report["schema"] = 1;
  report["tool"] = "toravg";
  {
    std::ostringstream os;
    os << "fnv1a:" << std::hex << fnv1a(file.source_text);
    report["scenario_hash"] = os.str();
  }
  report["seed"] = options.seed;
  report["tol_scale"] = options.tol_scale;
  report["space"] = json::parse(to_json_string(ctx.box));
  report["safe_box"] =
      json{{"action_lo", ctx.safe.action_lo()}, {"action_hi", ctx.safe.action_hi()}};

  bool all_pass = true;
  json tasks = json::array();
  int index = 0;
  for (const auto& task : file.tasks) {
    json entry;
    entry["index"] = index++;
    entry["kind"] = task.kind;
    json inputs = json::object();
    for (const auto& [k, v] : task.params) inputs[k] = v;
    entry["inputs"] = inputs;

    const auto start = std::chrono::steady_clock::now();
    try {
      TaskChecks checks;
      if (task.kind == "average") checks = run_average_task(ctx, task);
      else if (task.kind == "decompose") checks = run_decompose_task(ctx, task);
      else if (task.kind == "flow-decompose") checks = run_flow_decompose_task(ctx, task);
      else if (task.kind == "normal-form") checks = run_normal_form_task(ctx, task);
      else if (task.kind == "verify-periods") checks = run_verify_periods_task(ctx, task);
      else if (task.kind == "property-suite") checks = run_property_suite_task(ctx, task);
      else throw ParseError("unknown task kind '" + task.kind + "'", task.line, 1);

      entry["metrics"] = checks.metrics;
      entry["checks"] = checks_to_json(checks.checks);
      entry["pass"] = checks.pass();
      all_pass = all_pass && checks.pass();
    } catch (const std::exception& e) {
      entry["error"] = e.what();
      entry["pass"] = false;
      all_pass = false;
    }
    entry["time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    tasks.push_back(std::move(entry));
  }

  report["tasks"] = tasks;
  report["pass"] = all_pass;

  RunOutcome outcome;
  outcome.pass = all_pass;
  outcome.report_json = report.dump(2);
  outcome.report_json.push_back('\n');
  return outcome;
}

bool validate_report(const std::string& report_json) {
  json j = json::parse(report_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"] != 1)
    return false;
  for (const char* key : {"seed", "tol_scale"})
    if (!j.contains(key) || !j[key].is_number()) return false;
  if (!j.contains("pass") || !j["pass"].is_boolean()) return false;
  if (!j.contains("space") || !j["space"].is_object()) return false;
  const auto& space = j["space"];
  for (const char* key : {"d", "K", "N"})
    if (!space.contains(key) || !space[key].is_number_integer()) return false;
  for (const char* key : {"action_lo", "action_hi"})
    if (!space.contains(key) || !space[key].is_array()) return false;
  if (!j.contains("tasks") || !j["tasks"].is_array()) return false;
  for (const auto& t : j["tasks"]) {
    if (!t.is_object()) return false;
    if (!t.contains("kind") || !t["kind"].is_string()) return false;
    if (!t.contains("pass") || !t["pass"].is_boolean()) return false;
    if (!t.contains("time_ms") || !t["time_ms"].is_number()) return false;
    if (t.contains("checks")) {
      if (!t["checks"].is_array()) return false;
      for (const auto& c : t["checks"]) {
        if (!c.contains("name") || !c["name"].is_string()) return false;
        if (!c.contains("value") || !c["value"].is_number()) return false;
        if (!c.contains("tol") || !c["tol"].is_number()) return false;
        if (!c.contains("pass") || !c["pass"].is_boolean()) return false;
      }
    } else if (!t.contains("error")) {
      return false;
    }
  }
  return true;
}

const std::vector<std::pair<std::string, std::string>>& task_kinds() {
  static const std::vector<std::pair<std::string, std::string>> kinds = {
      {"average", "vertical average of a named field, checked against the quadrature oracle"},
      {"decompose", "split a symplectic vector field into Hamiltonian part + lift"},
      {"flow-decompose", "split a symplectic flow into fiber-preserving o Hamiltonian"},
      {"normal-form", "Hamiltonian normal form of a regular deformation"},
      {"verify-periods", "action functions, 1-periodicity, windings, independence"},
      {"property-suite", "seeded random property suite (see suite names)"},
  };
  return kinds;
}

}  // namespace toravg
