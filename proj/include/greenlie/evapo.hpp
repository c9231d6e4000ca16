#pragma once

#include "greenlie/closure.hpp"

#include <json.hpp>

#include <optional>
#include <string_view>
#include <vector>

namespace greenlie {

/// Constants of the tanh family, attached to control index i in {1, 2, 3}.
struct TanhConstants {
  Rational c1, c2, c3, c4;
  int i = 1;
};

/// 1 / (C4 + C3 tanh((C1 g1i - C2 g2i x + C2 g1i y) / g1i)).
/// Throws std::invalid_argument when g1i is zero.
Expr e_tanh(const ModelFields& m, const TanhConstants& c);

/// Unary functions F (written in the formal argument s) composed with the
/// characteristic lines L_n = -g2n x + g1n y.
struct CharacteristicFamily {
  std::vector<Expr> F;  // two or three entries
  int i = 1;
  int j = 1;
  std::optional<int> k;
  bool diagonal_term = false;
};

/// Two functions: F1(L_j) + F2(L_i); three: F1(L_i) + F2(L_j) + F3(L_k).
/// diagonal_term adds x^2 / (2 g1i g1j).
Expr e_characteristic(const ModelFields& m, const CharacteristicFamily& fam);

Expr characteristic_line(const ModelFields& m, int n);

struct Grid {
  int nx = 5;
  int ny = 5;
  double x0 = 0.1, x1 = 0.9;
  double y0 = 0.1, y1 = 0.9;

  /// "nx,ny,x0,x1,y0,y1"; throws std::invalid_argument.
  static Grid parse(std::string_view text);
  std::vector<std::pair<double, double>> points() const;
};

struct VerificationReport {
  double tol = 0.0;
  CrossVariant variant = CrossVariant::Bracket1;
  /// max over the grid of |Delta_ij|, and of |Delta_ij - [i == j]|.
  Grid3<double> delta_abs{};
  Grid3<double> delta_residual{};
  Grid3<bool> delta_pass{};
  Cube3<double> delta3_residual{};
  Cube3<double> lambda_residual{};
  double delta3_max = 0.0;
  double lambda_max = 0.0;
  bool delta3_pass = false;
  bool lambda_pass = false;
  /// |Delta_ii| <= tol everywhere while the Heisenberg condition needs Delta_ii != 0.
  std::array<bool, 3> diagonal_vanishes{};
  bool heisenberg_tension = false;

  bool all_pass() const;
};

class PoleInGrid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measures Delta_ij - [i == j], Delta_ijk and Lambda_ijk for every index
/// combination over the grid. Needs numeric parameters in m.
VerificationReport verify_candidate(const ModelFields& m, const Expr& e, const Grid& grid,
                                    double tol, CrossVariant variant = CrossVariant::Bracket1);

nlohmann::json to_json(const VerificationReport& r);

/// "tanh:C1,C2,C3,C4,i", "char:i,j[,k][,diag]:<F1>;<F2>[;<F3>]" or
/// "expr:<closed form in x, y>". Throws ParseError with the column in text.
Expr parse_e_descriptor(std::string_view text, const ModelFields& m);

}  // namespace greenlie
