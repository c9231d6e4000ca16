#pragma once

#include "greenlie/expr.hpp"

#include <array>
#include <optional>

namespace greenlie {

/// Vector field cx d/dx + cy d/dy + cz d/dz on R^3.
struct VectorField {
  Expr cx, cy, cz;

  static VectorField zero() { return {}; }

  const Expr& operator[](int i) const { return i == 0 ? cx : (i == 1 ? cy : cz); }
  Expr& operator[](int i) { return i == 0 ? cx : (i == 1 ? cy : cz); }

  bool is_zero() const
  {
    return cx.is_zero_exact() && cy.is_zero_exact() && cz.is_zero_exact();
  }

  friend bool operator==(const VectorField&, const VectorField&) = default;
  friend VectorField operator+(const VectorField& a, const VectorField& b)
  {
    return {a.cx + b.cx, a.cy + b.cy, a.cz + b.cz};
  }
  friend VectorField operator-(const VectorField& a, const VectorField& b)
  {
    return {a.cx - b.cx, a.cy - b.cy, a.cz - b.cz};
  }
  friend VectorField operator*(const Expr& s, const VectorField& f)
  {
    return {s * f.cx, s * f.cy, s * f.cz};
  }
};

/// [f, g]_i = sum_l f_l dg_i/dx_l - g_l df_i/dx_l.
VectorField lie_bracket(const VectorField& f, const VectorField& g);

/// Directional derivative f(phi).
Expr apply_to_scalar(const VectorField& f, const Expr& phi);

/// Exact quotient a / b when it exists as a single expression.
std::optional<Expr> exact_quotient(const Expr& a, const Expr& b);

/// phi with f == phi * ref, or nullopt. Pivots on the first nonzero
/// component of ref in x, y, z order and verifies the others exactly.
/// Throws std::invalid_argument when ref is the zero field.
std::optional<Expr> proportional_to(const VectorField& f, const VectorField& ref);

VectorField substitute(const VectorField& f, const Bindings& bindings);

std::string to_string(const VectorField& f);

}  // namespace greenlie
