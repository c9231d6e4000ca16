#pragma once

#include "greenlie/exact_rank.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <vector>

namespace greenlie {

/// c_ij in [X_i, Y_j] = c_ij Z; c[i-1][j-1].
using StructureMatrix = std::array<std::array<Rational, 3>, 3>;

StructureMatrix identity_structure();
/// {"c":[[r,r,r],[r,r,r],[r,r,r]]}; throws std::invalid_argument.
StructureMatrix structure_from_json(const nlohmann::json& j);

/// Seven-dimensional Lie algebra on the ordered basis X1 X2 X3 Y1 Y2 Y3 Z.
class Algebra7 {
 public:
  static constexpr int kDim = 7;
  enum Basis : int { X1, X2, X3, Y1, Y2, Y3, Z };
  using Vector = std::array<Rational, kDim>;

  struct TableEntry {
    int a;
    int b;
    Vector value;  // [e_a, e_b]
  };

  /// Only [X_i, Y_j] = c_ij Z (and the antisymmetric [Y_j, X_i]) are nonzero.
  static Algebra7 from_structure(const StructureMatrix& c);
  /// Arbitrary bracket table, filled antisymmetrically. Throws
  /// std::invalid_argument for a nonzero [e_a, e_a] or for entries (a, b) and
  /// (b, a) that are not negatives of each other.
  static Algebra7 from_table(const std::vector<TableEntry>& entries);

  const Vector& bracket(int a, int b) const { return table_[a][b]; }
  Vector bracket(const Vector& u, const Vector& v) const;
  const std::optional<StructureMatrix>& structure() const { return structure_; }

 private:
  std::array<std::array<Vector, kDim>, kDim> table_{};
  std::optional<StructureMatrix> structure_;
};

/// Jacobi identity on every basis triple.
bool jacobi_check(const Algebra7& a);

/// c diagonal with every diagonal entry nonzero. False for table-built algebras.
bool is_heisenberg(const Algebra7& a);

/// Chevalley-Eilenberg boundary with trivial coefficients,
///   d(x1 ^ ... ^ xp) = sum_{i<j} (-1)^(i+j) [xi, xj] ^ x1 ^ ..^xi^..^xj^.. ^ xp,
/// as a C(7,p-1) x C(7,p) matrix over lexicographically ordered subsets.
/// p ranges over 0..8; d_0, d_1 and d_8 are zero maps.
RationalMatrix boundary_matrix(const Algebra7& a, int p);

/// Basis subsets of size p in lexicographic order (bitmask per subset).
std::vector<unsigned> lex_subsets(int p);

struct ChainComplex {
  std::array<RationalMatrix, 9> d;  // d[p] : wedge^p -> wedge^(p-1)
};

ChainComplex build_chain_complex(const Algebra7& a);

struct HomologyResult {
  std::array<int, 8> ranks{};  // rank d_p, p = 0..7
  std::array<int, 8> betti{};  // dim H_p
  int euler = 0;
  bool heisenberg = false;
};

HomologyResult compute_homology(const Algebra7& a);
std::array<int, 8> betti_numbers(const Algebra7& a);
int euler_characteristic(const Algebra7& a);

nlohmann::json to_json(const HomologyResult& h);

}  // namespace greenlie
