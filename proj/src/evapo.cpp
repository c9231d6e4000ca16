#include "greenlie/evapo.hpp"

#include "greenlie/parser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace greenlie {

Expr characteristic_line(const ModelFields& m, int n)
{
  if (n < 1 || n > 3) throw std::out_of_range("field index must be 1, 2 or 3");
  const VectorField& f = m.f[n - 1];
  return -f.cy * x() + f.cx * y();
}

Expr e_tanh(const ModelFields& m, const TanhConstants& c)
{
  if (c.i < 1 || c.i > 3) throw std::out_of_range("tanh family index must be 1, 2 or 3");
  const Expr& g1 = m.f[c.i - 1].cx;
  const Expr& g2 = m.f[c.i - 1].cy;
  if (g1.is_zero_exact()) throw std::invalid_argument("tanh family needs gamma_1i != 0");
  Expr arg = (Expr(c.c1) * g1 - Expr(c.c2) * g2 * x() + Expr(c.c2) * g1 * y()) / g1;
  Expr denom = Expr(c.c4) + Expr(c.c3) * tanh(arg);
  if (denom.is_zero_exact()) throw std::invalid_argument("tanh family with C3 = C4 = 0 is undefined");
  return denom.reciprocal();
}

Expr e_characteristic(const ModelFields& m, const CharacteristicFamily& fam)
{
  if (fam.F.size() != (fam.k ? 3u : 2u))
    throw std::invalid_argument("characteristic family needs two functions, or three with k");
  const Atom s = Atom::variable(Var::S);
  for (const Expr& F : fam.F)
    for (const Atom& a : leaf_atoms(F))
      if (a.kind() == Atom::Kind::EPartial ||
          (a.kind() == Atom::Kind::Variable && a.var() != Var::S))
        throw std::invalid_argument("family functions must depend on s only, found " + to_string(a));

  auto compose = [&](const Expr& F, int n) {
    return substitute(F, Bindings{{s, characteristic_line(m, n)}});
  };
  Expr e;
  if (fam.k) {
    e = compose(fam.F[0], fam.i) + compose(fam.F[1], fam.j) + compose(fam.F[2], *fam.k);
  } else {
    e = compose(fam.F[0], fam.j) + compose(fam.F[1], fam.i);
  }
  if (fam.diagonal_term) {
    Expr denom = Expr(2) * m.f[fam.i - 1].cx * m.f[fam.j - 1].cx;
    if (denom.is_zero_exact()) throw std::invalid_argument("diagonal term needs gamma_1i, gamma_1j != 0");
    e += x().pow(2) / denom;
  }
  return e;
}

// ---------------------------------------------------------------- grid

Grid Grid::parse(std::string_view text)
{
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 6) throw std::invalid_argument("grid must be \"nx,ny,x0,x1,y0,y1\"");
  Grid g;
  try {
    g.nx = std::stoi(parts[0]);
    g.ny = std::stoi(parts[1]);
    g.x0 = std::stod(parts[2]);
    g.x1 = std::stod(parts[3]);
    g.y0 = std::stod(parts[4]);
    g.y1 = std::stod(parts[5]);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must be \"nx,ny,x0,x1,y0,y1\"");
  }
  if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("grid needs nx, ny >= 1");
  return g;
}

std::vector<std::pair<double, double>> Grid::points() const
{
  auto coord = [](double lo, double hi, int n, int k) {
    return n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  };
  std::vector<std::pair<double, double>> out;
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) out.emplace_back(coord(x0, x1, nx, a), coord(y0, y1, ny, b));
  return out;
}

// ---------------------------------------------------------------- verification

bool VerificationReport::all_pass() const
{
  for (const auto& row : delta_pass)
    for (bool b : row)
      if (!b) return false;
  return delta3_pass && lambda_pass;
}

VerificationReport verify_candidate(const ModelFields& m, const Expr& e, const Grid& grid,
                                    double tol, CrossVariant variant)
{
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  auto points = grid.points();
  if (points.empty()) throw std::invalid_argument("grid is empty");

  Grid3<Expr> phi;
  Cube3<Expr> d3, lam;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      phi[i][j] = variant == CrossVariant::Bracket1
                      ? delta_ij(m, std::nullopt, i + 1, j + 1)
                      : delta_ij_formula(m, std::nullopt, i + 1, j + 1, CrossVariant::Paper2);
      for (int k = 0; k < 3; ++k) {
        d3[i][j][k] = scalar_delta3(m, phi[i][j], k + 1);
        lam[i][j][k] = scalar_lambda(m, phi[i][j], k + 1);
      }
    }

  VerificationReport r;
  r.tol = tol;
  r.variant = variant;
  EJet jet(e, 3);
  for (const auto& [px, py] : points) {
    Assignment a;
    try {
      a = jet.at(px, py);
    } catch (const UnevaluableCandidate& err) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", px, py);
      throw PoleInGrid(std::string("candidate E has a pole at grid point ") + buf + ": " + err.what());
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = eval_numeric(phi[i][j], a);
        double target = i == j ? 1.0 : 0.0;
        r.delta_abs[i][j] = std::max(r.delta_abs[i][j], std::fabs(v));
        r.delta_residual[i][j] = std::max(r.delta_residual[i][j], std::fabs(v - target));
        for (int k = 0; k < 3; ++k) {
          r.delta3_residual[i][j][k] =
              std::max(r.delta3_residual[i][j][k], std::fabs(eval_numeric(d3[i][j][k], a)));
          r.lambda_residual[i][j][k] =
              std::max(r.lambda_residual[i][j][k], std::fabs(eval_numeric(lam[i][j][k], a)));
        }
      }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      r.delta_pass[i][j] = r.delta_residual[i][j] <= tol;
      for (int k = 0; k < 3; ++k) {
        r.delta3_max = std::max(r.delta3_max, r.delta3_residual[i][j][k]);
        r.lambda_max = std::max(r.lambda_max, r.lambda_residual[i][j][k]);
      }
    }
  r.delta3_pass = r.delta3_max <= tol;
  r.lambda_pass = r.lambda_max <= tol;
  for (int i = 0; i < 3; ++i) {
    r.diagonal_vanishes[i] = r.delta_abs[i][i] <= tol;
    r.heisenberg_tension = r.heisenberg_tension || r.diagonal_vanishes[i];
  }
  return r;
}

nlohmann::json to_json(const VerificationReport& r)
{
  using nlohmann::json;
  auto grid3 = [](const auto& g) {
    json out = json::array();
    for (const auto& row : g) {
      json jr = json::array();
      for (const auto& v : row) jr.push_back(v);
      out.push_back(jr);
    }
    return out;
  };
  auto cube3 = [&](const auto& c) {
    json out = json::array();
    for (const auto& g : c) out.push_back(grid3(g));
    return out;
  };
  json j;
  j["tol"] = r.tol;
  j["cross_variant"] = to_string(r.variant);
  j["delta_abs_max"] = grid3(r.delta_abs);
  j["delta_residual_max"] = grid3(r.delta_residual);
  j["delta_pass"] = grid3(r.delta_pass);
  j["delta3_residual_max"] = cube3(r.delta3_residual);
  j["lambda_residual_max"] = cube3(r.lambda_residual);
  j["delta3_max"] = r.delta3_max;
  j["lambda_max"] = r.lambda_max;
  j["delta3_pass"] = r.delta3_pass;
  j["lambda_pass"] = r.lambda_pass;
  j["diagonal_vanishes"] = {r.diagonal_vanishes[0], r.diagonal_vanishes[1], r.diagonal_vanishes[2]};
  j["heisenberg_tension"] = r.heisenberg_tension;
  if (r.heisenberg_tension)
    j["note"] =
        "some Delta_ii vanishes on the grid, while the Heisenberg condition requires Delta_ii != 0";
  j["all_pass"] = r.all_pass();
  return j;
}

// ---------------------------------------------------------------- descriptors

namespace {

std::vector<std::pair<std::string, std::size_t>> split(std::string_view text, char sep,
                                                       std::size_t offset)
{
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k == text.size() || text[k] == sep) {
      out.emplace_back(std::string(text.substr(start, k - start)), offset + start);
      start = k + 1;
    }
  }
  return out;
}

int parse_index(const std::string& s, std::size_t at)
{
  if (s == "1" || s == "2" || s == "3") return s[0] - '0';
  throw ParseError("expected index 1, 2 or 3, got '" + s + "'", at + 1);
}

Rational parse_constant(const std::string& s, std::size_t at)
{
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), at + 1);
  }
}

}  // namespace

Expr parse_e_descriptor(std::string_view text, const ModelFields& m)
{
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("E descriptor must start with tanh:, char: or expr:", 1);
  std::string_view kind = text.substr(0, colon);
  std::string_view body = text.substr(colon + 1);
  std::size_t body_at = colon + 1;

  if (kind == "expr") {
    try {
      return parse_expr(body);
    } catch (const ParseError& e) {
      throw ParseError(e.detail(), body_at + e.column());
    }
  }
  if (kind == "tanh") {
    auto parts = split(body, ',', body_at);
    if (parts.size() != 5) throw ParseError("tanh family needs C1,C2,C3,C4,i", body_at + 1);
    TanhConstants c;
    c.c1 = parse_constant(parts[0].first, parts[0].second);
    c.c2 = parse_constant(parts[1].first, parts[1].second);
    c.c3 = parse_constant(parts[2].first, parts[2].second);
    c.c4 = parse_constant(parts[3].first, parts[3].second);
    c.i = parse_index(parts[4].first, parts[4].second);
    return e_tanh(m, c);
  }
  if (kind == "char") {
    auto colon2 = body.find(':');
    if (colon2 == std::string_view::npos)
      throw ParseError("char family needs i,j[,k][,diag]:<F1>;<F2>[;<F3>]", body_at + 1);
    auto header = split(body.substr(0, colon2), ',', body_at);
    CharacteristicFamily fam;
    if (!header.empty() && header.back().first == "diag") {
      fam.diagonal_term = true;
      header.pop_back();
    }
    if (header.size() < 2 || header.size() > 3)
      throw ParseError("char family needs indices i,j or i,j,k", body_at + 1);
    fam.i = parse_index(header[0].first, header[0].second);
    fam.j = parse_index(header[1].first, header[1].second);
    if (header.size() == 3) fam.k = parse_index(header[2].first, header[2].second);
    std::size_t fn_at = body_at + colon2 + 1;
    auto fns = split(body.substr(colon2 + 1), ';', fn_at);
    if (fns.size() != header.size())
      throw ParseError("char family needs " + std::to_string(header.size()) + " functions of s",
                       fn_at + 1);
    for (const auto& [src, at] : fns) {
      try {
        fam.F.push_back(parse_expr(src));
      } catch (const ParseError& e) {
        throw ParseError(e.detail(), at + e.column());
      }
    }
    try {
      return e_characteristic(m, fam);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), fn_at + 1);
    }
  }
  throw ParseError("unknown E family '" + std::string(kind) + "'", 1);
}

}  // namespace greenlie
