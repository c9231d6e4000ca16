#pragma once

#include "greenlie/model.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace greenlie {

/// Which cross-term factor the second-order operator uses. Bracket1 is what
/// the bracket [f_i,[f0,f_j]] produces; Paper2 doubles the mixed term.
enum class CrossVariant { Paper2, Bracket1 };

std::string to_string(CrossVariant v);
CrossVariant cross_variant_from_string(const std::string& s);

/// Closed form substituted for E, or nullopt to keep E formal.
using EBinding = std::optional<Expr>;

// Index arguments below are 1-based, i, j, k in {1, 2, 3}.

/// phi with [f_i, [f0, f_j]] = phi * B. Throws std::invalid_argument when B
/// is zero and std::logic_error if the bracket is not a multiple of B.
Expr delta_ij(const ModelFields& m, const EBinding& e, int i, int j);

/// g1i g1j E_xx + w (g1i g2j + g1j g2i) E_xy + g2i g2j E_yy with w = 2 for
/// Paper2 and w = 1 for Bracket1.
Expr delta_ij_formula(const ModelFields& m, const EBinding& e, int i, int j, CrossVariant variant);

/// f_k(Delta_ij): the scalar with [f_k, Delta_ij B] = Delta_ijk B.
Expr delta_ijk(const ModelFields& m, const EBinding& e, int i, int j, int k);

/// Third-order expansion indexed by {1,2}-tuples: coefficients of E_(2,1) and
/// E_(1,2) are sums over magic_tuples(3, 4) and magic_tuples(3, 5).
Expr delta_ijk_magic(const ModelFields& m, const EBinding& e, int i, int j, int k);

/// psi with [[f0, f_k], Delta_ij B] = psi * B.
Expr lambda_ijk(const ModelFields& m, const EBinding& e, int i, int j, int k);

/// Same brackets for an arbitrary scalar phi in place of Delta_ij.
Expr scalar_delta3(const ModelFields& m, const Expr& phi, int k);
Expr scalar_lambda(const ModelFields& m, const Expr& phi, int k);

/// All distinct {1,2}-valued k-tuples with component sum n, in lexicographic order.
std::vector<std::vector<int>> magic_tuples(int k, int n);

enum class ClosureMode { Symbolic, Numeric };

std::string to_string(ClosureMode m);

template <class T>
using Grid3 = std::array<std::array<T, 3>, 3>;
template <class T>
using Cube3 = std::array<Grid3<T>, 3>;

struct ClosureReport {
  Grid3<Expr> c;
  Grid3<bool> constant_ok{};
  /// Value of c_ij at the first sample point when constant_ok holds.
  Grid3<std::optional<double>> c_value;
  Cube3<bool> delta3_zero{};
  Cube3<bool> lambda_zero{};
  /// [[f0, f_k], B] == 0; reported only, never required.
  std::array<bool, 3> b_central{};
  int realized_span_dim = 0;
  bool heisenberg = false;
  ClosureMode mode = ClosureMode::Symbolic;
  CrossVariant variant = CrossVariant::Bracket1;
  std::uint64_t seed = 0;

  bool all_constant() const;
  bool all_delta3_zero() const;
  bool all_lambda_zero() const;
  /// Every closure condition holds, so the brackets close on a 7-dim algebra.
  bool closes() const { return all_constant() && all_delta3_zero() && all_lambda_zero(); }
};

class UnevaluableCandidate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates the closure conditions for E. Symbolic mode uses is_zero on the
/// substituted expressions; a candidate with exp/sin/cos switches to numeric
/// mode, which evaluates at seeded sample points in [0.1, 0.9]^3. Numeric mode
/// needs a bound E and numeric parameters.
ClosureReport check_closure(const ModelFields& m, const EBinding& e, ClosureMode mode,
                            CrossVariant variant = CrossVariant::Bracket1,
                            std::uint64_t seed = 0);

nlohmann::json to_json(const ClosureReport& r);

/// Rank of the seven generator fields f_i, [f0, f_i], B at one seeded random
/// point; unassigned symbols take random values too.
int realized_span_dim(const ModelFields& m, const EBinding& e, std::uint64_t seed);

/// Symbolic partials of a closed-form E up to a fixed total order, evaluated
/// pointwise into an assignment for the e-partial atoms (plus x, y, z).
class EJet {
 public:
  EJet(const Expr& closed_e, int max_order);
  /// Throws UnevaluableCandidate when a value is not finite.
  Assignment at(double x, double y, double z = 0.0) const;

 private:
  std::vector<std::pair<Atom, Expr>> partials_;
};

}  // namespace greenlie
