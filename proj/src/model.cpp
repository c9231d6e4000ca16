#include "greenlie/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace greenlie {

namespace {

const char* kGammaNames[2][3] = {{"gamma11", "gamma12", "gamma13"},
                                 {"gamma21", "gamma22", "gamma23"}};

}  // namespace

std::vector<SignViolation> validate_params(const Params& p)
{
  std::vector<SignViolation> out;
  auto positive = [&](const char* name, const Rational& v) {
    if (!(v > 0)) out.push_back({name, "> 0", v});
  };
  auto negative = [&](const char* name, const Rational& v) {
    if (!(v < 0)) out.push_back({name, "< 0", v});
  };
  positive("alpha1", p.alpha[0]);
  positive("alpha2", p.alpha[1]);
  positive("alpha3", p.alpha[2]);
  negative("beta11", p.beta11);
  negative("beta22", p.beta22);
  negative("beta33", p.beta33);
  negative("beta22p", p.beta22p);
  positive("beta12", p.beta12);
  positive("beta13", p.beta13);
  positive("beta32", p.beta32);
  positive("gamma11", p.gamma[0][0]);
  positive("gamma12", p.gamma[0][1]);
  positive("gamma23", p.gamma[1][2]);
  negative("gamma21", p.gamma[1][0]);
  negative("gamma22", p.gamma[1][1]);
  positive("gamma13", p.gamma[0][2]);
  return out;
}

InvalidParams::InvalidParams(std::vector<SignViolation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid parameters:";
        for (const auto& v : violations)
          msg += " " + v.parameter + " = " + to_string(v.value) + " (needs " + v.constraint + ")";
        return msg;
      }()),
      violations_(std::move(violations))
{
}

ModelFields symbolic_fields()
{
  ModelFields m;
  Expr e = formal_e();
  m.f0.cx = param("alpha1") + param("beta11") * x() + param("beta12") * e;
  m.f0.cy = param("alpha2") + param("beta22") * y() + param("beta22p") * e + param("beta13") * z();
  m.f0.cz = param("alpha3") + param("beta32") * y() + param("beta33") * z();
  for (int i = 0; i < 3; ++i) m.f[i] = {param(kGammaNames[0][i]), param(kGammaNames[1][i]), Expr()};
  m.B = {-param("beta12"), -param("beta22p"), Expr()};
  return m;
}

ModelFields build_fields_unchecked(const Params& p)
{
  ModelFields m;
  Expr e = formal_e();
  m.f0.cx = Expr(p.alpha[0]) + Expr(p.beta11) * x() + Expr(p.beta12) * e;
  m.f0.cy = Expr(p.alpha[1]) + Expr(p.beta22) * y() + Expr(p.beta22p) * e + Expr(p.beta13) * z();
  m.f0.cz = Expr(p.alpha[2]) + Expr(p.beta32) * y() + Expr(p.beta33) * z();
  for (int i = 0; i < 3; ++i) m.f[i] = {Expr(p.gamma[0][i]), Expr(p.gamma[1][i]), Expr()};
  m.B = {Expr(Rational(-p.beta12)), Expr(Rational(-p.beta22p)), Expr()};
  return m;
}

ModelFields build_fields(const Params& p)
{
  auto violations = validate_params(p);
  if (!violations.empty()) throw InvalidParams(std::move(violations));
  return build_fields_unchecked(p);
}

ModelFields with_e(const ModelFields& m, const Expr& e)
{
  ModelFields out = m;
  out.f0 = substitute(m.f0, Bindings{{Atom::e_partial(0, 0), e}});
  return out;
}

Bindings parameter_bindings(const Params& p)
{
  Bindings b;
  auto bind = [&](const char* name, const Rational& v) { b.emplace(Atom::parameter(name), Expr(v)); };
  bind("alpha1", p.alpha[0]);
  bind("alpha2", p.alpha[1]);
  bind("alpha3", p.alpha[2]);
  bind("beta11", p.beta11);
  bind("beta12", p.beta12);
  bind("beta13", p.beta13);
  bind("beta22", p.beta22);
  bind("beta22p", p.beta22p);
  bind("beta32", p.beta32);
  bind("beta33", p.beta33);
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i) bind(kGammaNames[r][i], p.gamma[r][i]);
  return b;
}

Params demo_params()
{
  Params p;
  p.alpha = {Rational(1, 2), Rational(1), Rational(1, 4)};
  p.beta11 = -1;
  p.beta12 = Rational(1, 2);
  p.beta13 = Rational(1, 4);
  p.beta22 = -2;
  p.beta22p = Rational(-1, 3);
  p.beta32 = Rational(1, 2);
  p.beta33 = -1;
  p.gamma = {{{Rational(1), Rational(2), Rational(1, 2)}, {Rational(-1), Rational(-1, 2), Rational(1)}}};
  return p;
}

// ---------------------------------------------------------------- JSON

Rational rational_from_json(const nlohmann::json& j)
{
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_unsigned()) return Rational(static_cast<unsigned long>(j.get<unsigned long>()));
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected a number or rational string, got " + j.dump());
}

Params params_from_json(const nlohmann::json& j)
{
  if (!j.is_object()) throw std::invalid_argument("params: expected a JSON object");
  auto need = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
    if (!obj.contains(key)) throw std::invalid_argument(std::string("params: missing '") + key + "'");
    return obj.at(key);
  };
  auto triple = [&](const nlohmann::json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 3)
      throw std::invalid_argument("params: '" + what + "' must be an array of 3 numbers");
    std::array<Rational, 3> out;
    for (int i = 0; i < 3; ++i) {
      try {
        out[i] = rational_from_json(arr[i]);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("params: " + what + "[" + std::to_string(i) + "]: " + e.what());
      }
    }
    return out;
  };
  Params p;
  p.alpha = triple(need(j, "alpha"), "alpha");
  const auto& beta = need(j, "beta");
  if (!beta.is_object()) throw std::invalid_argument("params: 'beta' must be an object");
  auto b = [&](const char* key) {
    try {
      return rational_from_json(need(beta, key));
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      if (msg.rfind("params:", 0) == 0) throw;
      throw std::invalid_argument(std::string("params: beta.") + key + ": " + msg);
    }
  };
  p.beta11 = b("b11");
  p.beta12 = b("b12");
  p.beta13 = b("b13");
  p.beta22 = b("b22");
  p.beta22p = b("b22p");
  p.beta32 = b("b32");
  p.beta33 = b("b33");
  const auto& gamma = need(j, "gamma");
  if (!gamma.is_array() || gamma.size() != 2)
    throw std::invalid_argument("params: 'gamma' must be a 2x3 array");
  p.gamma[0] = triple(gamma[0], "gamma[0]");
  p.gamma[1] = triple(gamma[1], "gamma[1]");
  return p;
}

nlohmann::json params_to_json(const Params& p)
{
  auto s = [](const Rational& q) { return to_string(q); };
  nlohmann::json j;
  j["alpha"] = {s(p.alpha[0]), s(p.alpha[1]), s(p.alpha[2])};
  j["beta"] = {{"b11", s(p.beta11)}, {"b12", s(p.beta12)}, {"b13", s(p.beta13)},
               {"b22", s(p.beta22)}, {"b22p", s(p.beta22p)}, {"b32", s(p.beta32)},
               {"b33", s(p.beta33)}};
  j["gamma"] = {{s(p.gamma[0][0]), s(p.gamma[0][1]), s(p.gamma[0][2])},
                {s(p.gamma[1][0]), s(p.gamma[1][1]), s(p.gamma[1][2])}};
  return j;
}

// ---------------------------------------------------------------- simulation

void ControlSchedule::check() const
{
  if (segments.empty()) throw std::invalid_argument("control schedule is empty");
  if (segments.front().t_start != 0.0)
    throw std::invalid_argument("control schedule must start at t = 0");
  for (std::size_t k = 1; k < segments.size(); ++k)
    if (!(segments[k].t_start > segments[k - 1].t_start))
      throw std::invalid_argument("control schedule start times must strictly increase");
}

std::array<double, 3> ControlSchedule::at(double t) const
{
  std::array<double, 3> u = segments.front().u;
  for (const auto& s : segments) {
    if (s.t_start > t) break;
    u = s.u;
  }
  return u;
}

Trajectory simulate(const Params& p, const Expr& e, const ControlSchedule& ctrl, const State& init,
                    double dt, int steps)
{
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  ctrl.check();

  Bindings values = parameter_bindings(p);
  Expr closed_e = substitute(e, values);
  for (const Atom& a : leaf_atoms(closed_e))
    if (!(a.kind() == Atom::Kind::Variable && (a.var() == Var::X || a.var() == Var::Y)))
      throw std::invalid_argument("E must be a closed form in x and y; found " + to_string(a));

  ModelFields m = with_e(build_fields_unchecked(p), closed_e);
  std::array<std::array<double, 2>, 3> g;
  for (int i = 0; i < 3; ++i) g[i] = {p.gamma[0][i].get_d(), p.gamma[1][i].get_d()};

  const Atom ax = Atom::variable(Var::X), ay = Atom::variable(Var::Y), az = Atom::variable(Var::Z);
  auto rhs = [&](const State& s, const std::array<double, 3>& u) {
    Assignment at{{ax, s[0]}, {ay, s[1]}, {az, s[2]}};
    State d{eval_numeric(m.f0.cx, at), eval_numeric(m.f0.cy, at), eval_numeric(m.f0.cz, at)};
    for (int i = 0; i < 3; ++i) {
      d[0] += u[i] * g[i][0];
      d[1] += u[i] * g[i][1];
    }
    return d;
  };
  auto axpy = [](const State& s, double h, const State& k) {
    return State{s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
  };

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(init);
  State s = init;
  for (int n = 0; n < steps; ++n) {
    double t = n * dt;
    auto u = ctrl.at(t);
    State k1 = rhs(s, u);
    State k2 = rhs(axpy(s, dt / 2, k1), u);
    State k3 = rhs(axpy(s, dt / 2, k2), u);
    State k4 = rhs(axpy(s, dt, k3), u);
    State next;
    for (int c = 0; c < 3; ++c) next[c] = s[c] + dt / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    if (!std::isfinite(next[0]) || !std::isfinite(next[1]) || !std::isfinite(next[2])) {
      traj.diverged = true;
      break;
    }
    s = next;
    traj.times.push_back((n + 1) * dt);
    traj.states.push_back(s);
  }
  return traj;
}

void write_csv(std::ostream& os, const Trajectory& traj)
{
  os << "t,x,y,z\n";
  char buf[128];
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const State& s = traj.states[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.times[k], s[0], s[1], s[2]);
    os << buf;
  }
}

}  // namespace greenlie
