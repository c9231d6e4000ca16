#include "greenlie/cli.hpp"

#include "greenlie/closure.hpp"
#include "greenlie/evapo.hpp"
#include "greenlie/homology.hpp"
#include "greenlie/model.hpp"
#include "greenlie/parser.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace greenlie::cli {

namespace {

using nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string params_path;
  std::string e_desc;
  std::string c_arg;
  std::string mode = "symbolic";
  std::string cross = "bracket_1";
  std::uint64_t seed = 0;
  std::string out_path;
  std::string grid;
  double tol = 1e-9;
  std::string init;
  double dt = 0.01;
  int steps = 100;
  std::string controls_path;
};

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path)
{
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": invalid JSON");
  }
}

Params load_params(const Options& o)
{
  if (o.params_path.empty()) throw InputError("--params is required");
  json j = read_json_file(o.params_path);
  try {
    return params_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw InputError(o.params_path + ": " + e.what());
  }
}

ModelFields load_fields(const Params& p)
{
  try {
    return build_fields(p);
  } catch (const InvalidParams& e) {
    std::string msg = "invalid parameters:";
    for (const auto& v : e.violations())
      msg += " " + v.parameter + " = " + to_string(v.value) + " (needs " + v.constraint + ")";
    throw InputError(msg);
  }
}

std::optional<Expr> load_e(const Options& o, const ModelFields& m)
{
  if (o.e_desc.empty()) return std::nullopt;
  try {
    return parse_e_descriptor(o.e_desc, m);
  } catch (const ParseError& e) {
    std::string caret(e.column() > 0 ? e.column() - 1 : 0, ' ');
    throw InputError("--e: " + std::string(e.what()) + "\n  " + o.e_desc + "\n  " + caret + "^");
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--e: ") + e.what());
  }
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag)
{
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = text.find(',', start);
    std::string piece = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size())
      throw InputError(flag + ": bad number '" + piece + "' at column " + std::to_string(start + 1));
    out.push_back(v);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

ControlSchedule load_controls(const Options& o)
{
  if (o.controls_path.empty()) return ControlSchedule::zero();
  json j = read_json_file(o.controls_path);
  ControlSchedule ctrl;
  try {
    if (!j.is_array()) throw std::invalid_argument("expected an array of {\"t\", \"u\"} segments");
    for (const auto& seg : j) {
      ControlSchedule::Segment s;
      s.t_start = seg.at("t").get<double>();
      const auto& u = seg.at("u");
      if (!u.is_array() || u.size() != 3) throw std::invalid_argument("'u' must hold 3 numbers");
      for (std::size_t k = 0; k < 3; ++k) s.u[k] = u[k].get<double>();
      ctrl.segments.push_back(s);
    }
    ctrl.check();
  } catch (const std::exception& e) {
    throw InputError(o.controls_path + ": " + e.what());
  }
  return ctrl;
}

CrossVariant variant_of(const Options& o) { return cross_variant_from_string(o.cross); }

void emit(const std::string& text, const Options& o, std::ostream& out)
{
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw InputError(o.out_path + ": cannot write file");
  f << text;
}

void emit(const json& report, const Options& o, std::ostream& out) { emit(report.dump(2) + "\n", o, out); }

json field_json(const VectorField& f) { return {to_string(f.cx), to_string(f.cy), to_string(f.cz)}; }

// ---------------------------------------------------------------- commands

int cmd_validate(const Options& o, std::ostream& out)
{
  Params p = load_params(o);
  auto violations = validate_params(p);
  json v = json::array();
  for (const auto& s : violations)
    v.push_back({{"parameter", s.parameter}, {"constraint", s.constraint}, {"value", to_string(s.value)}});
  json report{{"valid", violations.empty()}, {"violations", v}, {"params", params_to_json(p)},
              {"seed", o.seed}};
  emit(report, o, out);
  return violations.empty() ? kExitOk : kExitVerificationFailed;
}

int cmd_bracket(const Options& o, std::ostream& out)
{
  ModelFields m = o.params_path.empty() ? symbolic_fields() : load_fields(load_params(o));
  EBinding e = load_e(o, m);
  ModelFields shown = e ? with_e(m, *e) : m;
  CrossVariant variant = variant_of(o);

  json report;
  report["e"] = e ? to_string(*e) : "E";
  report["f0"] = field_json(shown.f0);
  for (int i = 0; i < 3; ++i) report["f" + std::to_string(i + 1)] = field_json(shown.f[i]);
  report["B"] = field_json(shown.B);

  bool commute = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) commute = commute && lie_bracket(m.f[i], m.f[j]).is_zero();
  report["controls_commute"] = commute;

  json f0fi = json::array();
  for (int i = 0; i < 3; ++i) f0fi.push_back(field_json(lie_bracket(shown.f0, shown.f[i])));
  report["f0_fi"] = f0fi;

  json delta = json::array(), formula = json::array(), agrees = json::array();
  for (int i = 1; i <= 3; ++i) {
    json rd = json::array(), rf = json::array(), ra = json::array();
    for (int j = 1; j <= 3; ++j) {
      Expr d = delta_ij(m, e, i, j);
      Expr f = delta_ij_formula(m, e, i, j, variant);
      rd.push_back(to_string(d));
      rf.push_back(to_string(f));
      ra.push_back(is_zero(d - f, o.seed));
    }
    delta.push_back(rd);
    formula.push_back(rf);
    agrees.push_back(ra);
  }
  report["delta"] = delta;
  report["delta_formula"] = formula;
  report["formula_agrees"] = agrees;
  report["cross_variant"] = to_string(variant);
  report["seed"] = o.seed;
  emit(report, o, out);
  return kExitOk;
}

int cmd_closure(const Options& o, std::ostream& out)
{
  ModelFields m = load_fields(load_params(o));
  EBinding e = load_e(o, m);
  ClosureMode mode = o.mode == "numeric" ? ClosureMode::Numeric : ClosureMode::Symbolic;
  ClosureReport r;
  try {
    r = check_closure(m, e, mode, variant_of(o), o.seed);
  } catch (const std::invalid_argument& ex) {
    throw InputError(ex.what());
  }
  json report = to_json(r);
  report["e"] = e ? to_string(*e) : "E";
  emit(report, o, out);
  return r.all_constant() ? kExitOk : kExitVerificationFailed;
}

int cmd_check_e(const Options& o, std::ostream& out)
{
  ModelFields m = load_fields(load_params(o));
  if (o.e_desc.empty()) throw InputError("--e is required");
  Expr e = *load_e(o, m);
  Grid grid;
  if (!o.grid.empty()) {
    try {
      grid = Grid::parse(o.grid);
    } catch (const std::invalid_argument& ex) {
      throw InputError(std::string("--grid: ") + ex.what());
    }
  }
  VerificationReport r = verify_candidate(m, e, grid, o.tol, variant_of(o));
  json report = to_json(r);
  report["e"] = to_string(e);
  report["grid"] = {{"nx", grid.nx}, {"ny", grid.ny}, {"x0", grid.x0},
                    {"x1", grid.x1}, {"y0", grid.y0}, {"y1", grid.y1}};
  report["seed"] = o.seed;
  emit(report, o, out);
  return r.all_pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_homology(const Options& o, std::ostream& out)
{
  if (o.c_arg.empty()) throw InputError("--c is required");
  StructureMatrix c;
  if (o.c_arg == "identity") {
    c = identity_structure();
  } else {
    json j = read_json_file(o.c_arg);
    try {
      c = structure_from_json(j);
    } catch (const std::invalid_argument& ex) {
      throw InputError(o.c_arg + ": " + ex.what());
    }
  }
  Algebra7 a = Algebra7::from_structure(c);
  json report = to_json(compute_homology(a));
  json cj = json::array();
  for (const auto& row : c) cj.push_back({to_string(row[0]), to_string(row[1]), to_string(row[2])});
  report["c"] = cj;
  report["jacobi"] = jacobi_check(a);
  report["seed"] = o.seed;
  emit(report, o, out);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out)
{
  Params p = load_params(o);
  ModelFields m = load_fields(p);
  Expr e = o.e_desc.empty() ? Expr(0) : *load_e(o, m);
  if (o.init.empty()) throw InputError("--init is required");
  auto init = parse_doubles(o.init, "--init");
  if (init.size() != 3) throw InputError("--init needs three values x,y,z");
  if (!(o.dt > 0.0)) throw InputError("--dt must be positive");
  if (o.steps < 1) throw InputError("--steps must be at least 1");
  ControlSchedule ctrl = load_controls(o);
  Trajectory traj;
  try {
    traj = simulate(p, e, ctrl, {init[0], init[1], init[2]}, o.dt, o.steps);
  } catch (const std::invalid_argument& ex) {
    throw InputError(std::string("--e: ") + ex.what());
  }
  std::ostringstream csv;
  write_csv(csv, traj);
  emit(csv.str(), o, out);
  return traj.diverged ? kExitVerificationFailed : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Lie-bracket closure and homology toolkit for the greenhouse model", "greenlie"};
  app.require_subcommand(1);
  Options o;

  auto add_params = [&](CLI::App* sub) {
    return sub->add_option("--params", o.params_path, "Parameter JSON file");
  };
  auto add_e = [&](CLI::App* sub) {
    return sub->add_option("--e", o.e_desc, "E descriptor: tanh:..., char:..., expr:...");
  };
  auto add_cross = [&](CLI::App* sub) {
    sub->add_option("--cross", o.cross, "Second-order cross-term variant")
        ->check(CLI::IsMember({"paper_2", "bracket_1"}));
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed for sampled zero tests");
    sub->add_option("--out", o.out_path, "Write the report here instead of stdout");
  };

  auto* validate = app.add_subcommand("validate", "Check parameter signs");
  add_params(validate)->required();
  add_common(validate);

  auto* bracket = app.add_subcommand("bracket", "Model fields, [f0, f_i] and Delta_ij");
  add_params(bracket);
  add_e(bracket);
  add_cross(bracket);
  add_common(bracket);

  auto* closure = app.add_subcommand("closure", "Closure conditions and structure constants");
  add_params(closure)->required();
  add_e(closure);
  closure->add_option("--mode", o.mode, "Zero testing: symbolic or numeric")
      ->check(CLI::IsMember({"symbolic", "numeric"}));
  add_cross(closure);
  add_common(closure);

  auto* check_e = app.add_subcommand("check-e", "Measure a candidate E on a grid");
  add_params(check_e)->required();
  add_e(check_e)->required();
  check_e->add_option("--grid", o.grid, "nx,ny,x0,x1,y0,y1");
  check_e->add_option("--tol", o.tol, "Pass tolerance for residuals");
  add_cross(check_e);
  add_common(check_e);

  auto* homology = app.add_subcommand("homology", "Betti numbers of the 7-dimensional algebra");
  homology->add_option("--c", o.c_arg, "Structure matrix JSON file, or 'identity'")->required();
  add_common(homology);

  auto* simulate_cmd = app.add_subcommand("simulate", "RK4 trajectory as CSV");
  add_params(simulate_cmd)->required();
  add_e(simulate_cmd);
  simulate_cmd->add_option("--init", o.init, "Initial state x,y,z")->required();
  simulate_cmd->add_option("--dt", o.dt, "Step size");
  simulate_cmd->add_option("--steps", o.steps, "Number of steps");
  simulate_cmd->add_option("--controls", o.controls_path,
                           "JSON array of {\"t\": start, \"u\": [u1, u2, u3]}");
  add_common(simulate_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (bracket->parsed()) return cmd_bracket(o, out);
    if (closure->parsed()) return cmd_closure(o, out);
    if (check_e->parsed()) return cmd_check_e(o, out);
    if (homology->parsed()) return cmd_homology(o, out);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PoleInGrid& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const UnevaluableCandidate& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  return kExitInputError;
}

}  // namespace greenlie::cli
