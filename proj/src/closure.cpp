#include "greenlie/closure.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <random>

namespace greenlie {

std::string to_string(CrossVariant v)
{
  return v == CrossVariant::Paper2 ? "paper_2" : "bracket_1";
}

CrossVariant cross_variant_from_string(const std::string& s)
{
  if (s == "paper_2") return CrossVariant::Paper2;
  if (s == "bracket_1") return CrossVariant::Bracket1;
  throw std::invalid_argument("unknown cross variant '" + s + "' (expected paper_2 or bracket_1)");
}

std::string to_string(ClosureMode m)
{
  return m == ClosureMode::Symbolic ? "symbolic" : "numeric";
}

namespace {

void check_index(int i)
{
  if (i < 1 || i > 3) throw std::out_of_range("field index must be 1, 2 or 3");
}

Expr bind_e(const Expr& formal, const EBinding& e)
{
  if (!e) return formal;
  return substitute(formal, Bindings{{Atom::e_partial(0, 0), *e}});
}

const Expr& gamma(const ModelFields& m, int row, int i)
{
  return row == 1 ? m.f[i - 1].cx : m.f[i - 1].cy;
}

Expr require_multiple_of_b(const VectorField& f, const ModelFields& m, const char* what)
{
  auto phi = proportional_to(f, m.B);
  if (!phi) throw std::logic_error(std::string(what) + " is not a multiple of B");
  return *phi;
}

bool has_non_tanh_function(const Expr& e)
{
  for (const auto& [mono, c] : e.terms())
    for (const auto& [atom, power] : mono.factors()) {
      if (atom.kind() != Atom::Kind::Function) continue;
      if (atom.func() != Func::Tanh && atom.func() != Func::Recip) return true;
      if (has_non_tanh_function(atom.arg())) return true;
    }
  return false;
}

}  // namespace

Expr delta_ij(const ModelFields& m, const EBinding& e, int i, int j)
{
  check_index(i);
  check_index(j);
  VectorField outer = lie_bracket(m.f[i - 1], lie_bracket(m.f0, m.f[j - 1]));
  return bind_e(require_multiple_of_b(outer, m, "[f_i, [f0, f_j]]"), e);
}

Expr delta_ij_formula(const ModelFields& m, const EBinding& e, int i, int j, CrossVariant variant)
{
  check_index(i);
  check_index(j);
  Expr weight(variant == CrossVariant::Paper2 ? 2 : 1);
  Expr formal = gamma(m, 1, i) * gamma(m, 1, j) * e_partial(2, 0) +
                weight * (gamma(m, 1, i) * gamma(m, 2, j) + gamma(m, 1, j) * gamma(m, 2, i)) *
                    e_partial(1, 1) +
                gamma(m, 2, i) * gamma(m, 2, j) * e_partial(0, 2);
  return bind_e(formal, e);
}

Expr scalar_delta3(const ModelFields& m, const Expr& phi, int k)
{
  check_index(k);
  return apply_to_scalar(m.f[k - 1], phi);
}

Expr scalar_lambda(const ModelFields& m, const Expr& phi, int k)
{
  check_index(k);
  VectorField drift_k = lie_bracket(m.f0, m.f[k - 1]);
  return require_multiple_of_b(lie_bracket(drift_k, phi * m.B), m, "[[f0, f_k], phi B]");
}

Expr delta_ijk(const ModelFields& m, const EBinding& e, int i, int j, int k)
{
  return bind_e(scalar_delta3(m, delta_ij(m, std::nullopt, i, j), k), e);
}

Expr delta_ijk_magic(const ModelFields& m, const EBinding& e, int i, int j, int k)
{
  check_index(i);
  check_index(j);
  check_index(k);
  Expr formal;
  // A tuple of sum n has (6 - n) ones, i.e. that many x-derivatives.
  for (int n = 3; n <= 6; ++n) {
    Expr weight;
    for (const auto& sigma : magic_tuples(3, n))
      weight += gamma(m, sigma[0], i) * gamma(m, sigma[1], j) * gamma(m, sigma[2], k);
    formal += weight * e_partial(6 - n, n - 3);
  }
  return bind_e(formal, e);
}

Expr lambda_ijk(const ModelFields& m, const EBinding& e, int i, int j, int k)
{
  return bind_e(scalar_lambda(m, delta_ij(m, std::nullopt, i, j), k), e);
}

std::vector<std::vector<int>> magic_tuples(int k, int n)
{
  if (k < 1) throw std::invalid_argument("magic_tuples needs k >= 1");
  std::vector<std::vector<int>> out;
  if (n < k || n > 2 * k) return out;
  std::vector<int> t(static_cast<std::size_t>(k), 1);
  for (;;) {
    int sum = 0;
    for (int v : t) sum += v;
    if (sum == n) out.push_back(t);
    int pos = k - 1;
    while (pos >= 0 && t[static_cast<std::size_t>(pos)] == 2) t[static_cast<std::size_t>(pos--)] = 1;
    if (pos < 0) break;
    t[static_cast<std::size_t>(pos)] = 2;
  }
  return out;
}

// ---------------------------------------------------------------- jets

EJet::EJet(const Expr& closed_e, int max_order)
{
  for (int order = 0; order <= max_order; ++order)
    for (int dx = order; dx >= 0; --dx)
      partials_.emplace_back(Atom::e_partial(dx, order - dx), differentiate(closed_e, dx, order - dx));
}

Assignment EJet::at(double x, double y, double z) const
{
  Assignment a{{Atom::variable(Var::X), x}, {Atom::variable(Var::Y), y}, {Atom::variable(Var::Z), z}};
  for (const auto& [atom, expr] : partials_) {
    double v = eval_numeric(expr, a);
    if (!std::isfinite(v)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", x, y);
      throw UnevaluableCandidate(to_string(atom) + " is not finite at " + buf);
    }
    a.emplace(atom, v);
  }
  return a;
}

// ---------------------------------------------------------------- report

bool ClosureReport::all_constant() const
{
  for (const auto& row : constant_ok)
    for (bool b : row)
      if (!b) return false;
  return true;
}

bool ClosureReport::all_delta3_zero() const
{
  for (const auto& g : delta3_zero)
    for (const auto& row : g)
      for (bool b : row)
        if (!b) return false;
  return true;
}

bool ClosureReport::all_lambda_zero() const
{
  for (const auto& g : lambda_zero)
    for (const auto& row : g)
      for (bool b : row)
        if (!b) return false;
  return true;
}

namespace {

constexpr double kSampleLo = 0.1;
constexpr double kSampleHi = 0.9;

/// Zero test through numeric evaluation at fixed sample points.
class NumericZeroTest {
 public:
  NumericZeroTest(const Expr& closed_e, std::uint64_t seed) : jet_(closed_e, 3)
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(kSampleLo, kSampleHi);
    for (int k = 0; k < kZeroTestPoints; ++k) {
      double px = u(rng), py = u(rng), pz = u(rng);
      points_.push_back(jet_.at(px, py, pz));
    }
  }

  bool operator()(const Expr& formal) const
  {
    for (const auto& a : points_) {
      TermwiseValue v = eval_checked(formal, a);
      if (std::fabs(v.value) > kZeroTestTolerance * (1.0 + v.max_abs_term)) return false;
    }
    return true;
  }

  double value_at_first(const Expr& formal) const { return eval_checked(formal, points_.front()).value; }

 private:
  static TermwiseValue eval_checked(const Expr& formal, const Assignment& a)
  {
    try {
      return eval_termwise(formal, a);
    } catch (const MissingAssignment& err) {
      throw std::invalid_argument(std::string("numeric closure check needs numeric parameters: ") +
                                  err.what());
    }
  }

  EJet jet_;
  std::vector<Assignment> points_;
};

double first_point_value(const Expr& closed, std::uint64_t seed)
{
  if (auto c = closed.constant_value()) return c->get_d();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(kSampleLo, kSampleHi);
  Assignment a;
  for (const Atom& leaf : leaf_atoms(closed)) a.emplace(leaf, u(rng));
  return eval_numeric(closed, a);
}

int numeric_rank(std::vector<std::array<double, 3>> cols)
{
  double scale = 0.0;
  for (const auto& c : cols)
    for (double v : c) scale = std::max(scale, std::fabs(v));
  double tol = 1e-9 * std::max(1.0, scale);
  int rank = 0;
  for (int row = 0; row < 3 && !cols.empty(); ++row) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < cols.size(); ++c)
      if (std::fabs(cols[c][row]) > std::fabs(cols[best][row])) best = c;
    if (std::fabs(cols[best][row]) <= tol) continue;
    std::array<double, 3> pivot = cols[best];
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& c : cols) {
      double f = c[row] / pivot[row];
      for (int r = 0; r < 3; ++r) c[r] -= f * pivot[r];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

int realized_span_dim(const ModelFields& m, const EBinding& e, std::uint64_t seed)
{
  ModelFields mm = e ? with_e(m, *e) : m;
  std::vector<VectorField> gens;
  for (int i = 0; i < 3; ++i) gens.push_back(mm.f[i]);
  for (int i = 0; i < 3; ++i) gens.push_back(lie_bracket(mm.f0, mm.f[i]));
  gens.push_back(mm.B);

  std::set<Atom> leaves;
  for (const auto& g : gens)
    for (int c = 0; c < 3; ++c) {
      auto l = leaf_atoms(g[c]);
      leaves.insert(l.begin(), l.end());
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(kSampleLo, kSampleHi);
  Assignment point;
  for (const Atom& a : leaves) point.emplace(a, u(rng));

  std::vector<std::array<double, 3>> cols;
  for (const auto& g : gens)
    cols.push_back({eval_numeric(g.cx, point), eval_numeric(g.cy, point), eval_numeric(g.cz, point)});
  return numeric_rank(std::move(cols));
}

ClosureReport check_closure(const ModelFields& m, const EBinding& e, ClosureMode mode,
                            CrossVariant variant, std::uint64_t seed)
{
  if (e && mode == ClosureMode::Symbolic && has_non_tanh_function(*e)) mode = ClosureMode::Numeric;
  if (mode == ClosureMode::Numeric && !e)
    throw std::invalid_argument("numeric closure check needs a closed-form E");

  ClosureReport r;
  r.mode = mode;
  r.variant = variant;
  r.seed = seed;

  std::optional<NumericZeroTest> numeric;
  if (mode == ClosureMode::Numeric) numeric.emplace(*e, seed);
  auto zero = [&](const Expr& formal) {
    if (numeric) return (*numeric)(formal);
    return is_zero(bind_e(formal, e), seed);
  };

  Grid3<Expr> phi;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      phi[i - 1][j - 1] = variant == CrossVariant::Bracket1
                              ? delta_ij(m, std::nullopt, i, j)
                              : delta_ij_formula(m, std::nullopt, i, j, CrossVariant::Paper2);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Expr& p = phi[i][j];
      r.c[i][j] = bind_e(p, e);
      r.constant_ok[i][j] = zero(differentiate(p, Var::X)) && zero(differentiate(p, Var::Y));
      if (r.constant_ok[i][j])
        r.c_value[i][j] = numeric ? numeric->value_at_first(p) : first_point_value(r.c[i][j], seed);
      for (int k = 0; k < 3; ++k) {
        r.delta3_zero[i][j][k] = zero(scalar_delta3(m, p, k + 1));
        r.lambda_zero[i][j][k] = zero(scalar_lambda(m, p, k + 1));
      }
    }

  for (int k = 0; k < 3; ++k) {
    VectorField yb = lie_bracket(lie_bracket(m.f0, m.f[k]), m.B);
    r.b_central[k] = zero(yb.cx) && zero(yb.cy) && zero(yb.cz);
  }

  r.realized_span_dim = realized_span_dim(m, e, seed);

  bool heis = r.closes();
  for (int i = 0; i < 3 && heis; ++i)
    for (int j = 0; j < 3 && heis; ++j) {
      if (auto exact = r.c[i][j].constant_value()) {
        heis = (i == j) ? *exact != 0 : *exact == 0;
      } else {
        double v = r.c_value[i][j].value_or(0.0);
        heis = (i == j) ? std::fabs(v) > kZeroTestTolerance : std::fabs(v) <= kZeroTestTolerance;
      }
    }
  r.heisenberg = heis;
  return r;
}

nlohmann::json to_json(const ClosureReport& r)
{
  nlohmann::json j;
  j["c"] = nlohmann::json::array();
  j["c_value"] = nlohmann::json::array();
  j["constant_ok"] = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json c_row = nlohmann::json::array(), v_row = nlohmann::json::array(),
                   ok_row = nlohmann::json::array();
    for (int k = 0; k < 3; ++k) {
      c_row.push_back(to_string(r.c[i][k]));
      if (r.c_value[i][k])
        v_row.push_back(*r.c_value[i][k]);
      else
        v_row.push_back(nullptr);
      ok_row.push_back(r.constant_ok[i][k]);
    }
    j["c"].push_back(c_row);
    j["c_value"].push_back(v_row);
    j["constant_ok"].push_back(ok_row);
  }
  nlohmann::json d3_fail = nlohmann::json::array(), lam_fail = nlohmann::json::array();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        if (!r.delta3_zero[a][b][c]) d3_fail.push_back({a + 1, b + 1, c + 1});
        if (!r.lambda_zero[a][b][c]) lam_fail.push_back({a + 1, b + 1, c + 1});
      }
  j["delta3_zero"] = r.all_delta3_zero();
  j["delta3_failures"] = d3_fail;
  j["lambda_zero"] = r.all_lambda_zero();
  j["lambda_failures"] = lam_fail;
  j["b_central"] = {r.b_central[0], r.b_central[1], r.b_central[2]};
  j["realized_span_dim"] = r.realized_span_dim;
  j["heisenberg"] = r.heisenberg;
  j["closes"] = r.closes();
  j["mode"] = to_string(r.mode);
  j["cross_variant"] = to_string(r.variant);
  j["seed"] = r.seed;
  return j;
}

}  // namespace greenlie
