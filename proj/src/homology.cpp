#include "greenlie/homology.hpp"

#include "greenlie/model.hpp"

#include <bit>
#include <stdexcept>

namespace greenlie {

StructureMatrix identity_structure()
{
  StructureMatrix c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = i == j ? 1 : 0;
  return c;
}

StructureMatrix structure_from_json(const nlohmann::json& j)
{
  if (!j.is_object() || !j.contains("c")) throw std::invalid_argument("structure: missing 'c'");
  const auto& rows = j.at("c");
  if (!rows.is_array() || rows.size() != 3) throw std::invalid_argument("structure: 'c' must be 3x3");
  StructureMatrix c;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 3)
      throw std::invalid_argument("structure: 'c' must be 3x3");
    for (std::size_t k = 0; k < 3; ++k) {
      try {
        c[i][k] = rational_from_json(rows[i][k]);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("structure: c[" + std::to_string(i) + "][" + std::to_string(k) +
                                    "]: " + e.what());
      }
    }
  }
  return c;
}

Algebra7 Algebra7::from_structure(const StructureMatrix& c)
{
  Algebra7 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a.table_[X1 + i][Y1 + j][Z] = c[i][j];
      a.table_[Y1 + j][X1 + i][Z] = -c[i][j];
    }
  a.structure_ = c;
  return a;
}

Algebra7 Algebra7::from_table(const std::vector<TableEntry>& entries)
{
  Algebra7 alg;
  std::array<std::array<bool, kDim>, kDim> set{};
  for (const auto& e : entries) {
    if (e.a < 0 || e.a >= kDim || e.b < 0 || e.b >= kDim)
      throw std::invalid_argument("bracket table index out of range");
    bool nonzero = false;
    for (const auto& q : e.value) nonzero = nonzero || q != 0;
    if (e.a == e.b) {
      if (nonzero) throw std::invalid_argument("bracket table is not antisymmetric: [e, e] != 0");
      continue;
    }
    Vector neg;
    for (int m = 0; m < kDim; ++m) neg[m] = -e.value[m];
    if ((set[e.a][e.b] && alg.table_[e.a][e.b] != e.value) ||
        (set[e.b][e.a] && alg.table_[e.b][e.a] != neg))
      throw std::invalid_argument("bracket table is not antisymmetric");
    alg.table_[e.a][e.b] = e.value;
    alg.table_[e.b][e.a] = neg;
    set[e.a][e.b] = set[e.b][e.a] = true;
  }
  return alg;
}

Algebra7::Vector Algebra7::bracket(const Vector& u, const Vector& v) const
{
  Vector out{};
  for (int a = 0; a < kDim; ++a) {
    if (u[a] == 0) continue;
    for (int b = 0; b < kDim; ++b) {
      if (v[b] == 0) continue;
      Rational s = u[a] * v[b];
      for (int m = 0; m < kDim; ++m)
        if (table_[a][b][m] != 0) out[m] += s * table_[a][b][m];
    }
  }
  return out;
}

bool jacobi_check(const Algebra7& alg)
{
  using V = Algebra7::Vector;
  auto unit = [](int k) {
    V e{};
    e[k] = 1;
    return e;
  };
  for (int a = 0; a < Algebra7::kDim; ++a)
    for (int b = a + 1; b < Algebra7::kDim; ++b)
      for (int c = b + 1; c < Algebra7::kDim; ++c) {
        V t1 = alg.bracket(alg.bracket(a, b), unit(c));
        V t2 = alg.bracket(alg.bracket(b, c), unit(a));
        V t3 = alg.bracket(alg.bracket(c, a), unit(b));
        for (int m = 0; m < Algebra7::kDim; ++m)
          if (t1[m] + t2[m] + t3[m] != 0) return false;
      }
  return true;
}

bool is_heisenberg(const Algebra7& a)
{
  if (!a.structure()) return false;
  const auto& c = *a.structure();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if ((i == j) != (c[i][j] != 0)) return false;
  return true;
}

std::vector<unsigned> lex_subsets(int p)
{
  std::vector<unsigned> out;
  if (p < 0 || p > Algebra7::kDim) return out;
  // Enumerate index tuples s0 < s1 < ... in lexicographic order.
  std::vector<int> s(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) s[static_cast<std::size_t>(k)] = k;
  for (;;) {
    unsigned mask = 0;
    for (int v : s) mask |= 1u << v;
    out.push_back(mask);
    int k = p - 1;
    while (k >= 0 && s[static_cast<std::size_t>(k)] == Algebra7::kDim - p + k) --k;
    if (k < 0) break;
    ++s[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < p; ++t) s[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

RationalMatrix boundary_matrix(const Algebra7& a, int p)
{
  if (p < 0 || p > Algebra7::kDim + 1) throw std::out_of_range("boundary degree out of range");
  const auto cols = lex_subsets(p);
  const auto rows = lex_subsets(p - 1);
  RationalMatrix d(rows.size(), cols.size());
  if (p < 2) return d;

  std::array<int, 1u << Algebra7::kDim> row_of{};
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = static_cast<int>(r);

  for (std::size_t col = 0; col < cols.size(); ++col) {
    std::vector<int> elems;
    for (int k = 0; k < Algebra7::kDim; ++k)
      if (cols[col] & (1u << k)) elems.push_back(k);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        const auto& br = a.bracket(elems[static_cast<std::size_t>(i)], elems[static_cast<std::size_t>(j)]);
        // 1-based positions i+1, j+1 give sign (-1)^(i+j).
        int sign = ((i + j) % 2 == 0) ? 1 : -1;
        unsigned rest = cols[col] & ~(1u << elems[static_cast<std::size_t>(i)]) &
                        ~(1u << elems[static_cast<std::size_t>(j)]);
        for (int m = 0; m < Algebra7::kDim; ++m) {
          if (br[m] == 0 || (rest & (1u << m))) continue;
          // Moving e_m from the front into sorted position passes the smaller elements.
          int passes = std::popcount(rest & ((1u << m) - 1));
          int s = (passes % 2 == 0) ? sign : -sign;
          d(static_cast<std::size_t>(row_of[rest | (1u << m)]), col) += s * br[m];
        }
      }
  }
  return d;
}

ChainComplex build_chain_complex(const Algebra7& a)
{
  ChainComplex cc;
  for (int p = 0; p <= Algebra7::kDim + 1; ++p) cc.d[static_cast<std::size_t>(p)] = boundary_matrix(a, p);
  return cc;
}

HomologyResult compute_homology(const Algebra7& a)
{
  HomologyResult h;
  std::array<int, 9> rank{};
  for (int p = 2; p <= Algebra7::kDim; ++p)
    rank[static_cast<std::size_t>(p)] = static_cast<int>(exact_rank(boundary_matrix(a, p)));
  for (int p = 0; p <= Algebra7::kDim; ++p) {
    auto up = static_cast<std::size_t>(p);
    h.ranks[up] = rank[up];
    int chains = static_cast<int>(lex_subsets(p).size());
    h.betti[up] = chains - rank[up] - rank[up + 1];
    h.euler += (p % 2 == 0 ? 1 : -1) * h.betti[up];
  }
  h.heisenberg = is_heisenberg(a);
  return h;
}

std::array<int, 8> betti_numbers(const Algebra7& a) { return compute_homology(a).betti; }

int euler_characteristic(const Algebra7& a) { return compute_homology(a).euler; }

nlohmann::json to_json(const HomologyResult& h)
{
  return {{"betti", h.betti}, {"ranks", h.ranks}, {"euler", h.euler}, {"heisenberg", h.heisenberg}};
}

}  // namespace greenlie
