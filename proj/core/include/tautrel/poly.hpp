#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tautrel/rational.hpp"

namespace tautrel {

inline constexpr int kMaxVars = 16;

struct Mono {
  std::array<std::uint8_t, kMaxVars> e{};

  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool operator==(const Mono& o) const { return e == o.e; }
};

// Graded lex: higher total degree first, then larger exponent of the
// earlier variable first. This is the serialization order.
struct MonoOrder {
  bool operator()(const Mono& a, const Mono& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (int i = 0; i < kMaxVars; ++i)
      if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
  }
};

using VarList = std::shared_ptr<const std::vector<std::string>>;

VarList make_vars(std::vector<std::string> names);
VarList vars_a(int n);  // a1..an, shared instance per n
VarList vars_x(int k);  // x1..xk
bool same_vars(const VarList& a, const VarList& b);

class MultiPoly {
 public:
  using TermMap = std::map<Mono, Rational, MonoOrder>;

  MultiPoly();
  explicit MultiPoly(VarList vars);

  static MultiPoly constant(VarList vars, const Rational& c);
  static MultiPoly variable(VarList vars, int i);
  // Sum of the listed variables (0-based), e.g. a weight a(h).
  static MultiPoly var_sum(VarList vars, const std::vector<int>& idx);

  const VarList& vars() const { return vars_; }
  int nvars() const { return static_cast<int>(vars_->size()); }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int degree() const;  // -1 for the zero polynomial
  bool is_homogeneous() const;
  Rational coeff(const Mono& m) const;
  Rational constant_term() const;

  void add_term(const Mono& m, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;

  bool operator==(const MultiPoly& o) const;
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  // Same terms, reinterpreted over another variable list of equal or larger size.
  MultiPoly with_vars(VarList vars) const;

  std::string to_string() const;
  static MultiPoly parse(std::string_view text, VarList vars);

 private:
  void adopt(const MultiPoly& o);
  VarList vars_;
  TermMap terms_;
};

MultiPoly homogeneous_part(const MultiPoly& p, int d);
MultiPoly pow(const MultiPoly& p, int k);
// Divide by the variable with index v; every term must contain it.
MultiPoly exact_div_var(const MultiPoly& p, int v);
// Replace variable i by forms[i]; all forms live over `target`.
MultiPoly substitute_linear(const MultiPoly& p, const std::vector<MultiPoly>& forms, VarList target);
// Exact quotient by a nonzero linear form, NotDivisible otherwise.
MultiPoly exact_div_linear(const MultiPoly& p, const MultiPoly& form);

// Laurent polynomial in u with MultiPoly coefficients. Presentation only.
class LaurentU {
 public:
  void add(int u_exp, const MultiPoly& p);
  const std::map<int, MultiPoly>& coeffs() const { return coeffs_; }
  MultiPoly at(int u_exp) const;
  bool is_zero() const { return coeffs_.empty(); }
  std::string to_string() const;  // "p (u^k) + q (u^j)"

 private:
  std::map<int, MultiPoly> coeffs_;
};

}  // namespace tautrel
