#pragma once

#include "greenlie/fields.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenlie {

/// Greenhouse model parameters. gamma[r][i] holds gamma_{r+1,i+1}: the
/// (x, y) direction of control field f_{i+1}.
struct Params {
  std::array<Rational, 3> alpha;
  Rational beta11, beta12, beta13, beta22, beta22p, beta32, beta33;
  std::array<std::array<Rational, 3>, 2> gamma;
};

struct SignViolation {
  std::string parameter;
  std::string constraint;  // "> 0" or "< 0"
  Rational value;
};

/// Every violated sign constraint, in a fixed order; empty means valid.
/// gamma13 > 0 is enforced (the model's heating-on-humidity variant).
std::vector<SignViolation> validate_params(const Params& p);

class InvalidParams : public std::runtime_error {
 public:
  explicit InvalidParams(std::vector<SignViolation> violations);
  const std::vector<SignViolation>& violations() const { return violations_; }

 private:
  std::vector<SignViolation> violations_;
};

/// Drift f0, control fields f1..f3 (f[0..2]) and the air vector B.
struct ModelFields {
  VectorField f0;
  std::array<VectorField, 3> f;
  VectorField B;
};

/// Fields with every parameter left as a named symbol.
ModelFields symbolic_fields();
/// Throws InvalidParams when validate_params reports anything.
ModelFields build_fields(const Params& p);
ModelFields build_fields_unchecked(const Params& p);
/// Replaces E (and its partials) inside f0 by a closed form.
ModelFields with_e(const ModelFields& m, const Expr& e);

/// Parameter symbol -> value, for substituting into symbolic expressions.
Bindings parameter_bindings(const Params& p);

/// Synthetic demo values satisfying every sign constraint; not physical data.
Params demo_params();

/// {"alpha":[..3],"beta":{"b11",..,"b22p"},"gamma":[[..3],[..3]]}. Entries are
/// numbers or strings holding exact rationals ("3/2") or decimals.
/// Throws std::invalid_argument on malformed input.
Params params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const Params& p);
Rational rational_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- simulation

using State = std::array<double, 3>;

/// Piecewise-constant controls (alpha, f, w); each segment holds from its
/// start time until the next one begins.
struct ControlSchedule {
  struct Segment {
    double t_start = 0.0;
    std::array<double, 3> u{};
  };
  std::vector<Segment> segments;

  static ControlSchedule zero() { return {{Segment{}}}; }
  /// Throws std::invalid_argument unless starts are strictly increasing from 0.
  void check() const;
  std::array<double, 3> at(double t) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  bool diverged = false;
};

/// Fixed-step classical RK4 on x' = f0(x) + sum u_i f_i(x), controls held at
/// the value active at each step's start. E is a closed form in x, y (model
/// parameter symbols are allowed and take the values in p). A non-finite
/// state truncates the trajectory and sets diverged.
Trajectory simulate(const Params& p, const Expr& e, const ControlSchedule& ctrl, const State& init,
                    double dt, int steps);

/// Header "t,x,y,z", one row per stored state, 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace greenlie
