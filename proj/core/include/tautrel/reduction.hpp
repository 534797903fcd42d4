#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tautrel/classes.hpp"
#include "tautrel/kernels.hpp"
#include "tautrel/poly.hpp"

namespace tautrel {

// int kappa_{kappa} prod_{regular} psi^c prod_{frozen} psi^b  Xi^m_{g,n}; value over vars_a(n).
struct XiPairing {
  int g = 0, n = 0, m = 1;
  std::vector<int> c, b, kappa;
  int degree() const;  // degree d of the Xi component that is paired
  std::string key() const;
};

// int kappa prod psi_i^{d_i} psi_0^{d0} lambda_g DR_g(x1..xk, -sum x) over M_{g,k+1}; value over vars_x(k).
struct KernelPairing {
  int g = 0, k = 0;
  std::vector<int> d;
  int d0 = 0;
  std::vector<int> kappa;
  std::string key() const;
};

using SubRequest = std::variant<XiPairing, KernelPairing>;

// Sub-request whose local variables are replaced by forms in the parent's.
struct Factor {
  SubRequest req;
  std::vector<MultiPoly> forms;
};
struct Term {
  MultiPoly coeff;
  std::vector<Factor> factors;
};
// One rewrite step: value = (sum_t coeff_t * prod factors) / a_{divide_by}.
struct Rewrite {
  std::string rule;
  std::string args;
  VarList vars;
  std::vector<Term> terms;
  int divide_by = -1;
  std::string sexp() const;
};

// Test classes on M_{g,n+m}. Points are numbered 0..n+m-1, regular first.
struct PsiTestClass {
  std::vector<int> exps;
  std::vector<int> kappa;
};
// Single-node graph. Separating: side[p] in {0,1}, side-0 genus g1; each
// exps list covers that side's points in order, then the node branch.
// Non-separating: exps1 covers all points then both node branches.
struct DivisorTestClass {
  bool separating = true;
  int g1 = 0;
  std::vector<int> side;
  std::vector<int> exps1, exps2;
  std::vector<int> kappa1, kappa2;
};
struct TestClass {
  int g = 0, n = 1, m = 1;
  std::variant<PsiTestClass, DivisorTestClass> shape;
  int class_degree() const;
  int xi_degree() const;  // 3g-3+n+m - class_degree()
  std::string encode() const;
  static TestClass parse(const std::string& line);
};

enum class Evaluation { Direct, PsiAscending, PsiDescending };
enum class Route {
  Direct,
  PsiAscending,
  PsiDescending,
  BoundaryFirst,  // rewrite the first psi power through boundary divisors
  BoundaryLast,
  RuleDirect,
  RulePsiAscending,
  RulePsiDescending,
};
std::string to_string(Route r);
std::vector<Route> routes_for(const TestClass& t);

struct DegreeCheck {
  long checked = 0;
  long violated = 0;
  std::vector<std::string> failures;
};

class ReductionEngine {
 public:
  explicit ReductionEngine(const KernelTable& kt = KernelTable::shipped(), EmptyLegs empty = EmptyLegs::Fundamental);

  MultiPoly evaluate(const XiPairing& p, Evaluation how);
  MultiPoly evaluate(const KernelPairing& p);
  MultiPoly evaluate(const Rewrite& r, Evaluation how);

  // Rule instances. Each records its degree-range assertions.
  Rewrite kappa_reduce(const XiPairing& p);
  Rewrite regular_psi_reduce(const XiPairing& p, int i);
  Rewrite pullback(const TestClass& t);  // t must hold a DivisorTestClass
  // The same, refusing (InvalidSplit) boundary classes of another shape.
  Rewrite pullback_nonseparating(const TestClass& t) { return pullback_as(t, 1); }
  Rewrite pullback_separating_mixed(const TestClass& t) { return pullback_as(t, 2); }
  Rewrite pullback_separating_onesided(const TestClass& t) { return pullback_as(t, 3); }
  // psi_p = sum of boundary divisors (genus 0 and 1 only); coefficients with divisors.
  std::vector<std::pair<Rational, TestClass>> psi_to_boundary(const TestClass& t, bool last);

  MultiPoly evaluate(const TestClass& t, Route r, std::string* trace = nullptr);

  const DegreeCheck& degree_checks() const { return checks_; }
  EmptyLegs empty_legs() const { return empty_; }

 private:
  Rewrite pullback_as(const TestClass& t, int shape);  // 0: any
  void claim(bool ok, const std::string& what);
  const KernelTable& kt_;
  EmptyLegs empty_;
  std::map<std::string, MultiPoly> memo_;
  DegreeCheck checks_;
};

struct ConfluenceEntry {
  TestClass cls;
  std::vector<std::pair<Route, MultiPoly>> values;
  std::vector<std::string> traces;
  bool agree = true;
};

std::vector<TestClass> generate_corpus(int max_g, int max_n, int max_m);
std::vector<TestClass> parse_corpus(std::string_view text);
std::string render_corpus(const std::vector<TestClass>& corpus);
ConfluenceEntry check_confluence(ReductionEngine& engine, const TestClass& t, bool with_traces = false);

}  // namespace tautrel
