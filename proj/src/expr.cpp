#include "greenlie/expr.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace greenlie {

// ---------------------------------------------------------------- Atom

Atom Atom::variable(Var v)
{
  Atom a;
  a.kind_ = Kind::Variable;
  a.var_ = v;
  return a;
}

Atom Atom::parameter(std::string name)
{
  Atom a;
  a.kind_ = Kind::Parameter;
  a.name_ = std::move(name);
  return a;
}

Atom Atom::e_partial(int dx, int dy)
{
  if (dx < 0 || dy < 0) throw std::invalid_argument("negative order of E partial");
  Atom a;
  a.kind_ = Kind::EPartial;
  a.dx_ = dx;
  a.dy_ = dy;
  return a;
}

Atom Atom::function(Func f, Expr arg)
{
  Atom a;
  a.kind_ = Kind::Function;
  a.func_ = f;
  a.arg_ = std::make_shared<const Expr>(std::move(arg));
  return a;
}

int compare(const Atom& a, const Atom& b)
{
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  switch (a.kind_) {
    case Atom::Kind::Parameter:
      return a.name_.compare(b.name_) < 0 ? -1 : (a.name_ == b.name_ ? 0 : 1);
    case Atom::Kind::Variable:
      return a.var_ == b.var_ ? 0 : (a.var_ < b.var_ ? -1 : 1);
    case Atom::Kind::EPartial: {
      // Lower total order first, then more x-derivatives first.
      int oa = a.dx_ + a.dy_, ob = b.dx_ + b.dy_;
      if (oa != ob) return oa < ob ? -1 : 1;
      if (a.dx_ != b.dx_) return a.dx_ > b.dx_ ? -1 : 1;
      return 0;
    }
    case Atom::Kind::Function:
      if (a.func_ != b.func_) return a.func_ < b.func_ ? -1 : 1;
      if (a.arg_ == b.arg_) return 0;
      return compare(*a.arg_, *b.arg_);
  }
  return 0;
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(const Atom& a, int power)
{
  if (power != 0) factors_.emplace_back(a, power);
}

Monomial Monomial::from_factors(std::vector<Factor> factors)
{
  std::sort(factors.begin(), factors.end(),
            [](const Factor& l, const Factor& r) { return l.first < r.first; });
  Monomial m;
  for (auto& f : factors) {
    if (!m.factors_.empty() && m.factors_.back().first == f.first)
      m.factors_.back().second += f.second;
    else
      m.factors_.push_back(std::move(f));
    if (m.factors_.back().second == 0) m.factors_.pop_back();
  }
  return m;
}

int Monomial::exponent(const Atom& a) const
{
  for (const auto& [atom, e] : factors_)
    if (atom == a) return e;
  return 0;
}

Monomial Monomial::inverse() const
{
  Monomial m = *this;
  for (auto& f : m.factors_) f.second = -f.second;
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
  Monomial out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
      out.factors_.push_back(*i++);
    } else if (i == a.factors_.end() || j->first < i->first) {
      out.factors_.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0) out.factors_.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

int compare(const Monomial& a, const Monomial& b)
{
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    int ea, eb;
    if (j == b.factors_.end()) {
      ea = i->second;
      eb = 0;
    } else if (i == a.factors_.end()) {
      ea = 0;
      eb = j->second;
    } else {
      int c = compare(i->first, j->first);
      if (c < 0) {
        ea = i->second;
        eb = 0;
      } else if (c > 0) {
        ea = 0;
        eb = j->second;
      } else {
        ea = i->second;
        eb = j->second;
        if (ea == eb) {
          ++i;
          ++j;
          continue;
        }
      }
    }
    return ea < eb ? -1 : 1;
  }
  return 0;
}

// ---------------------------------------------------------------- Expr

Expr::Expr(const Rational& c)
{
  if (c != 0) terms_.emplace(Monomial(), c);
}

Expr Expr::atom(const Atom& a, int power)
{
  Expr e;
  e.terms_.emplace(Monomial(a, power), Rational(1));
  return e;
}

Expr Expr::term(const Monomial& m, const Rational& c)
{
  Expr e;
  if (c != 0) e.terms_.emplace(m, c);
  return e;
}

std::optional<Rational> Expr::constant_value() const
{
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

void Expr::add_term(const Monomial& m, const Rational& c)
{
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Expr Expr::operator-() const
{
  Expr e = *this;
  for (auto& [m, c] : e.terms_) c = -c;
  return e;
}

Expr& Expr::operator+=(const Expr& o)
{
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Expr& Expr::operator-=(const Expr& o)
{
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Expr& Expr::operator*=(const Expr& o)
{
  *this = *this * o;
  return *this;
}

Expr operator*(const Expr& a, const Expr& b)
{
  Expr out;
  if (a.terms_.empty() || b.terms_.empty()) return out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Expr Expr::pow(int n) const
{
  if (n < 0) return reciprocal().pow(-n);
  Expr result(1);
  Expr base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Expr Expr::reciprocal() const
{
  if (terms_.empty()) throw std::domain_error("division by zero");
  if (terms_.size() == 1) {
    const auto& [m, c] = *terms_.begin();
    // 1/Recip(u)^k is u^k, expanded.
    std::vector<Monomial::Factor> kept;
    Expr expanded(1);
    for (const auto& [atom, power] : m.factors()) {
      if (atom.kind() == Atom::Kind::Function && atom.func() == Func::Recip)
        expanded *= atom.arg().pow(power);
      else
        kept.emplace_back(atom, -power);
    }
    return expanded * Expr::term(Monomial::from_factors(std::move(kept)), Rational(1) / c);
  }
  // Recip arguments are scaled to leading coefficient 1.
  Rational lead = leading_term().second;
  Expr scaled = *this * Expr(Rational(1) / lead);
  return Expr(Rational(1) / lead) * Expr::atom(Atom::function(Func::Recip, std::move(scaled)));
}

int compare(const Expr& a, const Expr& b)
{
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
    int c = compare(i->first, j->first);
    if (c != 0) return c;
    int d = cmp(i->second, j->second);
    if (d != 0) return d < 0 ? -1 : 1;
  }
  if (i == a.terms_.end() && j == b.terms_.end()) return 0;
  return i == a.terms_.end() ? -1 : 1;
}

// ---------------------------------------------------------------- builders

Expr var(Var v) { return Expr::atom(Atom::variable(v)); }
Expr param(const std::string& name) { return Expr::atom(Atom::parameter(name)); }
Expr e_partial(int dx, int dy) { return Expr::atom(Atom::e_partial(dx, dy)); }

Expr apply(Func f, const Expr& arg)
{
  if (f == Func::Recip) return arg.reciprocal();
  if (arg.is_zero_exact()) {
    switch (f) {
      case Func::Tanh:
      case Func::Sin:
        return Expr(0);
      case Func::Exp:
      case Func::Cos:
        return Expr(1);
      case Func::Recip:
        break;
    }
  }
  if (arg.leading_term().second < 0) {
    switch (f) {
      case Func::Tanh:
      case Func::Sin:
        return -Expr::atom(Atom::function(f, -arg));
      case Func::Cos:
        return Expr::atom(Atom::function(f, -arg));
      default:
        break;
    }
  }
  return Expr::atom(Atom::function(f, arg));
}

Expr normalize(const std::vector<std::pair<Monomial, Rational>>& raw_terms)
{
  Expr e;
  for (const auto& [m, c] : raw_terms) e += Expr::term(m, c);
  return e;
}

// ---------------------------------------------------------------- calculus

namespace {

Expr atom_derivative(const Atom& a, Var v)
{
  switch (a.kind()) {
    case Atom::Kind::Parameter:
      return Expr();
    case Atom::Kind::Variable:
      return a.var() == v ? Expr(1) : Expr();
    case Atom::Kind::EPartial:
      if (v == Var::X) return e_partial(a.dx() + 1, a.dy());
      if (v == Var::Y) return e_partial(a.dx(), a.dy() + 1);
      return Expr();
    case Atom::Kind::Function: {
      Expr du = differentiate(a.arg(), v);
      if (du.is_zero_exact()) return Expr();
      switch (a.func()) {
        case Func::Tanh:
          return (Expr(1) - Expr::atom(a, 2)) * du;
        case Func::Exp:
          return Expr::atom(a) * du;
        case Func::Sin:
          return Expr::atom(Atom::function(Func::Cos, a.arg())) * du;
        case Func::Cos:
          return -apply(Func::Sin, a.arg()) * du;
        case Func::Recip:
          return -Expr::atom(a, 2) * du;
      }
    }
  }
  return Expr();
}

}  // namespace

Expr differentiate(const Expr& e, Var v)
{
  std::map<Atom, Expr> cache;
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    const auto& fs = m.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto& [atom, power] = fs[k];
      auto it = cache.find(atom);
      if (it == cache.end()) it = cache.emplace(atom, atom_derivative(atom, v)).first;
      if (it->second.is_zero_exact()) continue;
      std::vector<Monomial::Factor> rest(fs.begin(), fs.end());
      rest[k].second -= 1;
      Expr left = Expr::term(Monomial::from_factors(std::move(rest)), c * power);
      out += left * it->second;
    }
  }
  return out;
}

Expr differentiate(const Expr& e, int dx, int dy)
{
  Expr r = e;
  for (int i = 0; i < dx; ++i) r = differentiate(r, Var::X);
  for (int i = 0; i < dy; ++i) r = differentiate(r, Var::Y);
  return r;
}

// ---------------------------------------------------------------- substitution

namespace {

class Substituter {
 public:
  explicit Substituter(const Bindings& b) : bindings_(b)
  {
    auto e_it = bindings_.find(Atom::e_partial(0, 0));
    if (e_it == bindings_.end()) return;
    e_form_ = e_it->second;
    for (const auto& [atom, value] : bindings_) {
      if (atom.kind() != Atom::Kind::EPartial || (atom.dx() == 0 && atom.dy() == 0)) continue;
      if (differentiate(*e_form_, atom.dx(), atom.dy()) != value)
        throw ContradictorySubstitution("binding for " + to_string(atom) +
                                        " contradicts the binding for E");
    }
    for (const auto& [atom, value] : bindings_)
      if (atom.kind() != Atom::Kind::EPartial) rest_.emplace(atom, value);
  }

  Expr run(const Expr& e)
  {
    Expr out;
    for (const auto& [m, c] : e.terms()) {
      Expr t(c);
      std::vector<Monomial::Factor> untouched;
      for (const auto& [atom, power] : m.factors()) {
        const Expr& r = replacement(atom);
        if (r == Expr::atom(atom)) {
          untouched.emplace_back(atom, power);
        } else {
          t *= r.pow(power);
        }
      }
      if (!untouched.empty()) t *= Expr::term(Monomial::from_factors(std::move(untouched)), 1);
      out += t;
    }
    return out;
  }

 private:
  const Expr& replacement(const Atom& a)
  {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    Expr r;
    if (a.kind() == Atom::Kind::EPartial && e_form_) {
      Expr d = differentiate(*e_form_, a.dx(), a.dy());
      r = rest_.empty() ? d : Substituter(rest_).run(d);
    } else if (auto b = bindings_.find(a); b != bindings_.end()) {
      r = b->second;
    } else if (a.kind() == Atom::Kind::Function) {
      r = apply(a.func(), run(a.arg()));
    } else {
      r = Expr::atom(a);
    }
    return cache_.emplace(a, std::move(r)).first->second;
  }

  const Bindings& bindings_;
  std::optional<Expr> e_form_;
  Bindings rest_;
  std::map<Atom, Expr> cache_;
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings)
{
  if (bindings.empty()) return e;
  return Substituter(bindings).run(e);
}

// ---------------------------------------------------------------- numerics

MissingAssignment::MissingAssignment(const Atom& a)
    : std::runtime_error("no value assigned to " + to_string(a)), atom_(a)
{
}

namespace {

double eval_atom(const Atom& a, const Assignment& assignment, std::map<Atom, double>& cache);

double eval_monomial(const Monomial& m, const Assignment& assignment,
                     std::map<Atom, double>& cache)
{
  double v = 1.0;
  for (const auto& [atom, power] : m.factors()) {
    double base = eval_atom(atom, assignment, cache);
    v *= power == 1 ? base : std::pow(base, power);
  }
  return v;
}

double eval_cached(const Expr& e, const Assignment& assignment, std::map<Atom, double>& cache)
{
  double sum = 0.0;
  for (const auto& [m, c] : e.terms()) sum += c.get_d() * eval_monomial(m, assignment, cache);
  return sum;
}

double eval_atom(const Atom& a, const Assignment& assignment, std::map<Atom, double>& cache)
{
  if (auto it = assignment.find(a); it != assignment.end()) return it->second;
  if (a.kind() != Atom::Kind::Function) throw MissingAssignment(a);
  if (auto it = cache.find(a); it != cache.end()) return it->second;
  double u = eval_cached(a.arg(), assignment, cache);
  double v = 0.0;
  switch (a.func()) {
    case Func::Tanh: v = std::tanh(u); break;
    case Func::Exp: v = std::exp(u); break;
    case Func::Sin: v = std::sin(u); break;
    case Func::Cos: v = std::cos(u); break;
    case Func::Recip: v = 1.0 / u; break;
  }
  cache.emplace(a, v);
  return v;
}

}  // namespace

double eval_numeric(const Expr& e, const Assignment& assignment)
{
  std::map<Atom, double> cache;
  return eval_cached(e, assignment, cache);
}

TermwiseValue eval_termwise(const Expr& e, const Assignment& assignment)
{
  std::map<Atom, double> cache;
  TermwiseValue out;
  for (const auto& [m, c] : e.terms()) {
    double t = c.get_d() * eval_monomial(m, assignment, cache);
    out.value += t;
    out.max_abs_term = std::max(out.max_abs_term, std::fabs(t));
  }
  return out;
}

// ---------------------------------------------------------------- queries

namespace {

template <class Visit>
void walk_atoms(const Expr& e, Visit&& visit)
{
  for (const auto& [m, c] : e.terms())
    for (const auto& [atom, power] : m.factors()) {
      visit(atom);
      if (atom.kind() == Atom::Kind::Function) walk_atoms(atom.arg(), visit);
    }
}

}  // namespace

std::set<Atom> leaf_atoms(const Expr& e)
{
  std::set<Atom> out;
  walk_atoms(e, [&](const Atom& a) {
    if (a.kind() != Atom::Kind::Function) out.insert(a);
  });
  return out;
}

bool has_function_atoms(const Expr& e)
{
  bool found = false;
  walk_atoms(e, [&](const Atom& a) { found = found || a.kind() == Atom::Kind::Function; });
  return found;
}

bool contains_atom(const Expr& e, const Atom& target)
{
  bool found = false;
  walk_atoms(e, [&](const Atom& a) { found = found || a == target; });
  return found;
}

int max_e_order(const Expr& e)
{
  int order = -1;
  walk_atoms(e, [&](const Atom& a) {
    if (a.kind() == Atom::Kind::EPartial) order = std::max(order, a.dx() + a.dy());
  });
  return order;
}

bool is_zero(const Expr& e, std::uint64_t seed)
{
  if (e.is_zero_exact()) return true;
  if (!has_function_atoms(e)) return false;

  std::set<Atom> leaves = leaf_atoms(e);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> grid(-2048, 2048);
  int accepted = 0;
  for (int attempt = 0; accepted < kZeroTestPoints && attempt < 8 * kZeroTestPoints; ++attempt) {
    Assignment point;
    for (const Atom& a : leaves) point.emplace(a, grid(rng) / 1024.0);
    TermwiseValue v = eval_termwise(e, point);
    if (!std::isfinite(v.value) || !std::isfinite(v.max_abs_term)) continue;
    if (std::fabs(v.value) > kZeroTestTolerance * (1.0 + v.max_abs_term)) return false;
    ++accepted;
  }
  return accepted == kZeroTestPoints;
}

// ---------------------------------------------------------------- printing

namespace {

std::string var_name(Var v)
{
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::Z: return "z";
    case Var::S: return "s";
  }
  return "?";
}

std::string func_name(Func f)
{
  switch (f) {
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Recip: return "";
  }
  return "?";
}

std::string factor_string(const Atom& a, int power)
{
  if (a.kind() == Atom::Kind::Function && a.func() == Func::Recip)
    return "(" + to_string(a.arg()) + ")^" + std::to_string(-power);
  std::string s = to_string(a);
  if (power != 1) s += "^" + std::to_string(power);
  return s;
}

}  // namespace

std::string to_string(const Atom& a)
{
  switch (a.kind()) {
    case Atom::Kind::Parameter:
      return a.name();
    case Atom::Kind::Variable:
      return var_name(a.var());
    case Atom::Kind::EPartial:
      if (a.dx() == 0 && a.dy() == 0) return "E";
      return "E_" + std::to_string(a.dx()) + "_" + std::to_string(a.dy());
    case Atom::Kind::Function:
      if (a.func() == Func::Recip) return "(" + to_string(a.arg()) + ")^-1";
      return func_name(a.func()) + "(" + to_string(a.arg()) + ")";
  }
  return "?";
}

std::string to_string(const Expr& e)
{
  if (e.is_zero_exact()) return "0";
  std::string out;
  bool first = true;
  for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string body;
    if (m.empty() || mag != 1) body = mag.get_str();
    for (const auto& [atom, power] : m.factors()) {
      if (!body.empty()) body += "*";
      body += factor_string(atom, power);
    }
    out += body;
  }
  return out;
}

}  // namespace greenlie
