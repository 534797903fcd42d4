#include "tautrel/poly.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

#include "tautrel/errors.hpp"

namespace tautrel {

namespace {

VarList cached_vars(char prefix, int n) {
  static std::mutex mu;
  static std::map<std::pair<char, int>, VarList> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{prefix, n}];
  if (!slot) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back(std::string(1, prefix) + std::to_string(i));
    slot = std::make_shared<const std::vector<std::string>>(std::move(names));
  }
  return slot;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

VarList make_vars(std::vector<std::string> names) {
  if (names.size() > static_cast<size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

VarList vars_a(int n) { return cached_vars('a', n); }
VarList vars_x(int k) { return cached_vars('x', k); }

bool same_vars(const VarList& a, const VarList& b) { return a == b || *a == *b; }

MultiPoly::MultiPoly() : vars_(vars_a(0)) {}
MultiPoly::MultiPoly(VarList vars) : vars_(std::move(vars)) {
  if (nvars() > kMaxVars) throw std::invalid_argument("too many variables");
}

MultiPoly MultiPoly::constant(VarList vars, const Rational& c) {
  MultiPoly p(std::move(vars));
  p.add_term(Mono{}, c);
  return p;
}

MultiPoly MultiPoly::variable(VarList vars, int i) {
  MultiPoly p(std::move(vars));
  if (i < 0 || i >= p.nvars()) throw std::out_of_range("variable index");
  Mono m;
  m.e[i] = 1;
  p.add_term(m, 1);
  return p;
}

MultiPoly MultiPoly::var_sum(VarList vars, const std::vector<int>& idx) {
  MultiPoly p(std::move(vars));
  for (int i : idx) {
    Mono m;
    m.e[i] = 1;
    p.add_term(m, 1);
  }
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

int MultiPoly::degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

bool MultiPoly::is_homogeneous() const {
  return terms_.empty() || terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
}

Rational MultiPoly::coeff(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational MultiPoly::constant_term() const { return coeff(Mono{}); }

void MultiPoly::add_term(const Mono& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

// Constants (and zero) carry no real dependence on the universe, so an
// operation between a constant and a proper polynomial takes the latter's.
void MultiPoly::adopt(const MultiPoly& o) {
  if (same_vars(vars_, o.vars_)) return;
  if (is_constant()) {
    vars_ = o.vars_;
    return;
  }
  if (o.is_constant()) return;
  throw std::invalid_argument("polynomials over different variables");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  adopt(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  adopt(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r(a.vars_);
  r.adopt(b);
  if (a.is_zero() || b.is_zero()) return r;
  Rational t;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Mono m;
      for (int i = 0; i < kMaxVars; ++i) {
        int s = ma.e[i] + mb.e[i];
        if (s > 255) throw std::overflow_error("exponent overflow");
        m.e[i] = static_cast<std::uint8_t>(s);
      }
      t = ca * cb;
      r.add_term(m, t);
    }
  }
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (terms_ != o.terms_) return false;
  return is_constant() || same_vars(vars_, o.vars_);
}

MultiPoly MultiPoly::with_vars(VarList vars) const {
  MultiPoly r(std::move(vars));
  for (const auto& [m, c] : terms_) {
    for (int i = r.nvars(); i < kMaxVars; ++i)
      if (m.e[i] != 0) throw std::invalid_argument("with_vars: variable out of range");
  }
  r.terms_ = terms_;
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    std::string mono;
    for (int i = 0; i < nvars(); ++i) {
      if (m.e[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += (*vars_)[i];
      if (m.e[i] > 1) mono += '^' + std::to_string(m.e[i]);
    }
    if (mono.empty())
      out += tautrel::to_string(c);
    else if (c == 1)
      out += mono;
    else
      out += tautrel::to_string(c) + "*" + mono;
  }
  return out;
}

MultiPoly MultiPoly::parse(std::string_view text, VarList vars) {
  MultiPoly p(vars);
  std::string s = trim(text);
  if (s == "0") return p;
  if (s.empty()) throw ParseError("empty polynomial");
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t next = s.find('+', pos);
    std::string term = trim(std::string_view(s).substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (term.empty()) throw ParseError("empty term in: " + s);
    Rational coef = 1;
    Mono m;
    if (term[0] == '-' && term.size() > 1 && !(term[1] >= '0' && term[1] <= '9')) {
      coef = -1;
      term.erase(0, 1);
    }
    size_t fpos = 0;
    while (fpos <= term.size()) {
      size_t star = term.find('*', fpos);
      std::string f = trim(std::string_view(term).substr(fpos, star == std::string::npos ? std::string::npos : star - fpos));
      if (f.empty()) throw ParseError("empty factor in: " + term);
      if ((f[0] >= '0' && f[0] <= '9') || f[0] == '-') {
        coef *= parse_rational(f);
      } else {
        auto caret = f.find('^');
        std::string name = f.substr(0, caret);
        int e = 1;
        if (caret != std::string::npos) {
          try {
            e = std::stoi(f.substr(caret + 1));
          } catch (const std::exception&) {
            throw ParseError("bad exponent in: " + f);
          }
        }
        int idx = -1;
        for (int i = 0; i < static_cast<int>(vars->size()); ++i)
          if ((*vars)[i] == name) idx = i;
        if (idx < 0) throw ParseError("unknown variable: " + name);
        if (e < 0 || m.e[idx] + e > 255) throw ParseError("bad exponent in: " + f);
        m.e[idx] = static_cast<std::uint8_t>(m.e[idx] + e);
      }
      if (star == std::string::npos) break;
      fpos = star + 1;
    }
    p.add_term(m, coef);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return p;
}

MultiPoly homogeneous_part(const MultiPoly& p, int d) {
  MultiPoly r(p.vars());
  for (const auto& [m, c] : p.terms())
    if (m.degree() == d) r.add_term(m, c);
  return r;
}

MultiPoly pow(const MultiPoly& p, int k) {
  if (k < 0) throw std::invalid_argument("negative power");
  MultiPoly r = MultiPoly::constant(p.vars(), 1);
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

MultiPoly exact_div_var(const MultiPoly& p, int v) {
  MultiPoly r(p.vars());
  for (const auto& [m, c] : p.terms()) {
    if (m.e[v] == 0) throw NotDivisible(p.to_string() + " is not divisible by " + (*p.vars())[v]);
    Mono q = m;
    q.e[v] -= 1;
    r.add_term(q, c);
  }
  return r;
}

MultiPoly substitute_linear(const MultiPoly& p, const std::vector<MultiPoly>& forms, VarList target) {
  if (static_cast<int>(forms.size()) < p.nvars()) throw std::invalid_argument("substitute_linear: missing forms");
  MultiPoly r(target);
  std::vector<std::vector<MultiPoly>> powers(p.nvars());
  auto power = [&](int i, int e) -> const MultiPoly& {
    auto& v = powers[i];
    if (v.empty()) v.push_back(MultiPoly::constant(target, 1));
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * forms[i]);
    return v[e];
  };
  for (const auto& [m, c] : p.terms()) {
    MultiPoly t = MultiPoly::constant(target, c);
    for (int i = 0; i < p.nvars() && !t.is_zero(); ++i)
      if (m.e[i]) t = t * power(i, m.e[i]);
    r += t;
  }
  return r;
}

MultiPoly exact_div_linear(const MultiPoly& p, const MultiPoly& form) {
  if (form.is_zero()) throw ZeroDenominator("division by zero form");
  int lead = -1;
  Rational lc;
  for (int i = 0; i < form.nvars() && lead < 0; ++i) {
    Mono m;
    m.e[i] = 1;
    Rational c = form.coeff(m);
    if (c != 0) {
      lead = i;
      lc = c;
    }
  }
  if (lead < 0 || form.degree() != 1 || !form.is_homogeneous())
    throw std::invalid_argument("exact_div_linear: not a homogeneous linear form");
  MultiPoly rem = p;
  MultiPoly q(p.is_constant() ? form.vars() : p.vars());
  while (!rem.is_zero()) {
    const Mono* best = nullptr;
    for (const auto& [m, c] : rem.terms())
      if (!best || m.e[lead] > best->e[lead]) best = &m;
    if (best->e[lead] == 0) throw NotDivisible("not divisible by " + form.to_string() + ": " + p.to_string());
    Mono qm = *best;
    qm.e[lead] -= 1;
    MultiPoly step(q.vars());
    step.add_term(qm, rem.coeff(*best) / lc);
    q += step;
    rem -= step * form;
  }
  return q;
}

void LaurentU::add(int u_exp, const MultiPoly& p) {
  if (p.is_zero()) return;
  auto it = coeffs_.find(u_exp);
  if (it == coeffs_.end()) {
    coeffs_.emplace(u_exp, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) coeffs_.erase(it);
}

MultiPoly LaurentU::at(int u_exp) const {
  auto it = coeffs_.find(u_exp);
  return it == coeffs_.end() ? MultiPoly() : it->second;
}

std::string LaurentU::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += it->second.to_string() + " (u^" + std::to_string(it->first) + ")";
  }
  return out;
}

}  // namespace tautrel
