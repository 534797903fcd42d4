#include "tautrel/reduction.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"
#include "text_fields.hpp"

namespace tautrel {

using detail::join_ints;

namespace {

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

std::string list_sexp(const char* tag, const std::vector<int>& v) { return std::string("(") + tag + (v.empty() ? "" : " ") + join_ints(v, ' ') + ")"; }

std::string req_sexp(const SubRequest& r) {
  if (auto* x = std::get_if<XiPairing>(&r))
    return "(xi " + std::to_string(x->g) + " " + std::to_string(x->n) + " " + std::to_string(x->m) + " " +
           list_sexp("c", x->c) + " " + list_sexp("b", x->b) + " " + list_sexp("kappa", x->kappa) + ")";
  const auto& k = std::get<KernelPairing>(r);
  return "(kernel " + std::to_string(k.g) + " " + std::to_string(k.k) + " " + list_sexp("d", k.d) + " " +
         std::to_string(k.d0) + " " + list_sexp("kappa", k.kappa) + ")";
}

std::vector<MultiPoly> leg_forms(const VarList& A, const std::vector<int>& legs) {
  std::vector<MultiPoly> f;
  for (int j : legs) f.push_back(MultiPoly::variable(A, j));
  return f;
}

// point ids on a side, split into regular and frozen, with their exponents
struct Side {
  int genus = 0;
  std::vector<int> regular, frozen;  // point ids
  std::vector<int> rexp, fexp;
  int node = 0;
  std::vector<int> kappa;
};

}  // namespace

int XiPairing::degree() const { return 3 * g - 3 + n + m - sum(c) - sum(b) - sum(kappa); }

std::string XiPairing::key() const {
  return "X|" + std::to_string(g) + "|" + std::to_string(n) + "|" + std::to_string(m) + "|" + join_ints(c) + "|" +
         join_ints(b) + "|" + join_ints(kappa);
}

std::string KernelPairing::key() const {
  return "K|" + std::to_string(g) + "|" + std::to_string(k) + "|" + join_ints(d) + "|" + std::to_string(d0) + "|" +
         join_ints(kappa);
}

std::string Rewrite::sexp() const {
  std::string s = "(" + rule + (args.empty() ? "" : " " + args);
  for (const auto& t : terms) {
    s += " (term \"" + t.coeff.to_string() + "\"";
    for (const auto& f : t.factors) {
      s += " " + req_sexp(f.req) + " (at";
      for (const auto& form : f.forms) s += " \"" + form.to_string() + "\"";
      s += ")";
    }
    s += ")";
  }
  if (divide_by >= 0) s += " (div \"" + (*vars)[divide_by] + "\")";
  return s + ")";
}

int TestClass::class_degree() const {
  if (auto* p = std::get_if<PsiTestClass>(&shape)) return sum(p->exps) + sum(p->kappa);
  const auto& d = std::get<DivisorTestClass>(shape);
  return 1 + sum(d.exps1) + sum(d.exps2) + sum(d.kappa1) + sum(d.kappa2);
}

int TestClass::xi_degree() const { return 3 * g - 3 + n + m - class_degree(); }

std::string TestClass::encode() const {
  std::string head = " g=" + std::to_string(g) + " n=" + std::to_string(n) + " m=" + std::to_string(m);
  if (auto* p = std::get_if<PsiTestClass>(&shape)) return "psi" + head + " exps=" + join_ints(p->exps) + " kappa=" + join_ints(p->kappa);
  const auto& d = std::get<DivisorTestClass>(shape);
  if (!d.separating) return "nonsep" + head + " exps=" + join_ints(d.exps1) + " kappa=" + join_ints(d.kappa1);
  return "sep" + head + " g1=" + std::to_string(d.g1) + " side=" + join_ints(d.side) + " exps1=" + join_ints(d.exps1) +
         " exps2=" + join_ints(d.exps2) + " kappa1=" + join_ints(d.kappa1) + " kappa2=" + join_ints(d.kappa2);
}

TestClass TestClass::parse(const std::string& line) {
  std::string tag;
  auto f = detail::record_fields(line, &tag);
  TestClass t;
  t.g = detail::field_int(f, "g");
  t.n = detail::field_int(f, "n");
  t.m = detail::field_int(f, "m");
  const int N = t.n + t.m;
  if (t.g < 0 || t.n < 1 || t.m < 1 || 2 * t.g - 2 + N <= 0) throw ParseError("test class: bad (g,n,m)");
  if (tag == "psi") {
    PsiTestClass p{detail::field_ints(f, "exps"), detail::field_ints(f, "kappa")};
    if (static_cast<int>(p.exps.size()) != N) throw ParseError("test class: exps size");
    t.shape = p;
  } else if (tag == "nonsep") {
    DivisorTestClass d;
    d.separating = false;
    d.exps1 = detail::field_ints(f, "exps");
    d.kappa1 = detail::field_ints(f, "kappa");
    if (t.g < 1 || static_cast<int>(d.exps1.size()) != N + 2) throw ParseError("test class: bad nonsep");
    t.shape = d;
  } else if (tag == "sep") {
    DivisorTestClass d;
    d.g1 = detail::field_int(f, "g1");
    d.side = detail::field_ints(f, "side");
    d.exps1 = detail::field_ints(f, "exps1");
    d.exps2 = detail::field_ints(f, "exps2");
    d.kappa1 = detail::field_ints(f, "kappa1");
    d.kappa2 = detail::field_ints(f, "kappa2");
    if (static_cast<int>(d.side.size()) != N || d.g1 < 0 || d.g1 > t.g) throw ParseError("test class: bad sep");
    int k0 = 0;
    for (int s : d.side) {
      if (s != 0 && s != 1) throw ParseError("test class: side must be 0 or 1");
      k0 += s == 0;
    }
    const int k1 = N - k0;
    if (static_cast<int>(d.exps1.size()) != k0 + 1 || static_cast<int>(d.exps2.size()) != k1 + 1)
      throw ParseError("test class: exps sizes");
    if (2 * d.g1 - 1 + k0 <= 0 || 2 * (t.g - d.g1) - 1 + k1 <= 0) throw ParseError("test class: unstable side");
    t.shape = d;
  } else {
    throw ParseError("test class: unknown tag '" + tag + "'");
  }
  return t;
}

std::string to_string(Route r) {
  switch (r) {
    case Route::Direct: return "direct";
    case Route::PsiAscending: return "psi-ascending";
    case Route::PsiDescending: return "psi-descending";
    case Route::BoundaryFirst: return "boundary-first";
    case Route::BoundaryLast: return "boundary-last";
    case Route::RuleDirect: return "rule-direct";
    case Route::RulePsiAscending: return "rule-psi-ascending";
    case Route::RulePsiDescending: return "rule-psi-descending";
  }
  return "?";
}

std::vector<Route> routes_for(const TestClass& t) {
  if (auto* p = std::get_if<PsiTestClass>(&t.shape)) {
    std::vector<Route> r{Route::Direct, Route::PsiAscending, Route::PsiDescending};
    if (t.g <= 1 && sum(p->exps) > 0) {
      r.push_back(Route::BoundaryFirst);
      r.push_back(Route::BoundaryLast);
    }
    return r;
  }
  return {Route::RuleDirect, Route::RulePsiAscending, Route::RulePsiDescending};
}

ReductionEngine::ReductionEngine(const KernelTable& kt, EmptyLegs empty) : kt_(kt), empty_(empty) {}

void ReductionEngine::claim(bool ok, const std::string& what) {
  ++checks_.checked;
  if (!ok) {
    ++checks_.violated;
    checks_.failures.push_back(what);
  }
}

MultiPoly ReductionEngine::evaluate(const XiPairing& p, Evaluation how) {
  if (p.n < 0 || p.m < 1 || 2 * p.g - 2 + p.n + p.m <= 0) throw UnstableTarget("xi pairing: unstable " + p.key());
  if (static_cast<int>(p.c.size()) != p.n || static_cast<int>(p.b.size()) != p.m)
    throw std::invalid_argument("xi pairing: exponent sizes " + p.key());
  VarList A = vars_a(p.n);
  if (p.degree() < 0) return MultiPoly(A);
  const std::string key = p.key() + "#" + std::to_string(static_cast<int>(how));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  MultiPoly v(A);
  const bool psi_free = std::all_of(p.c.begin(), p.c.end(), [](int x) { return x == 0; });
  if (!p.kappa.empty()) {
    v = evaluate(kappa_reduce(p), how);
  } else if (p.n == 0 || how == Evaluation::Direct || psi_free) {
    v = pair_Xi(p.g, p.n, p.m, p.b, kt_, p.c, empty_);
  } else {
    int i = -1;
    for (int j = 0; j < p.n; ++j)
      if (p.c[j] > 0 && (i < 0 || how == Evaluation::PsiDescending)) i = j;
    v = evaluate(regular_psi_reduce(p, i), how);
  }
  if (!v.is_zero() && (!v.is_homogeneous() || v.degree() != p.degree()))
    throw Error("xi pairing has wrong degree: " + p.key() + " -> " + v.to_string());
  memo_.emplace(key, v);
  return v;
}

MultiPoly ReductionEngine::evaluate(const KernelPairing& p) {
  VarList X = vars_x(p.k);
  if (p.k < 1 || 2 * p.g - 1 + p.k <= 0) return MultiPoly(X);  // lambda_g^2 = 0 kills k = 0
  const std::string key = p.key();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::vector<int> d = p.d;
  for (int c : p.kappa) d.push_back(c + 1);
  const int k = static_cast<int>(d.size());
  MultiPoly v = kt_.kernel(p.g, k, d, p.d0);
  if (k > p.k) {
    std::vector<MultiPoly> forms;
    for (int j = 0; j < k; ++j) forms.push_back(j < p.k ? MultiPoly::variable(X, j) : MultiPoly(X));
    v = substitute_linear(v, forms, X);
  }
  memo_.emplace(key, v);
  return v;
}

MultiPoly ReductionEngine::evaluate(const Rewrite& r, Evaluation how) {
  MultiPoly total(r.vars);
  for (const auto& t : r.terms) {
    MultiPoly acc = t.coeff;
    for (const auto& f : t.factors) {
      if (acc.is_zero()) break;
      MultiPoly v = std::visit(
          [&](const auto& q) {
            if constexpr (std::is_same_v<std::decay_t<decltype(q)>, XiPairing>)
              return evaluate(q, how);
            else
              return evaluate(q);
          },
          f.req);
      acc = acc * substitute_linear(v, f.forms, r.vars);
    }
    total += acc;
  }
  if (r.divide_by >= 0) total = exact_div_var(total, r.divide_by);
  return total;
}

Rewrite ReductionEngine::kappa_reduce(const XiPairing& p) {
  Rewrite r;
  r.rule = "kappa";
  r.args = list_sexp("kappa", p.kappa);
  r.vars = vars_a(p.n);
  XiPairing q{p.g, p.n + static_cast<int>(p.kappa.size()), p.m, p.c, p.b, {}};
  for (int c : p.kappa) q.c.push_back(c + 1);
  std::vector<MultiPoly> forms = leg_forms(r.vars, [&] {
    std::vector<int> v(p.n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }());
  for (size_t j = 0; j < p.kappa.size(); ++j) forms.push_back(MultiPoly(r.vars));
  r.terms.push_back({MultiPoly::constant(r.vars, 1), {{q, forms}}});
  claim(q.degree() == p.degree(), "kappa changes degree at " + p.key());
  return r;
}

Rewrite ReductionEngine::regular_psi_reduce(const XiPairing& p, int i) {
  if (!p.kappa.empty()) throw std::invalid_argument("regular psi rule: reduce kappa first");
  if (i < 0 || i >= p.n) throw std::invalid_argument("regular psi rule: leg out of range");
  if (p.c[i] < 1) throw std::invalid_argument("regular psi rule: no psi at leg " + std::to_string(i + 1));
  const int g = p.g, n = p.n, m = p.m, d = p.degree();
  const bool in_range = d >= 2 * g - 1 + m;
  Rewrite r;
  r.rule = "psi-rule";
  r.args = "i=" + std::to_string(i + 1);
  r.vars = vars_a(n);
  r.divide_by = i;
  const VarList& A = r.vars;
  std::vector<int> rest;
  for (int j = 0; j < n; ++j)
    if (j != i) rest.push_back(j);
  std::vector<int> cm = p.c;
  --cm[i];

  XiPairing t1{g, n - 1, m + 1, {}, p.b, {}};
  for (int j : rest) t1.c.push_back(p.c[j]);
  t1.b.push_back(p.c[i] - 1);
  r.terms.push_back({MultiPoly::constant(A, 1), {{t1, leg_forms(A, rest)}}});
  claim(t1.degree() == d + 1, "psi rule: first summand degree at " + p.key());
  if (in_range) claim(d + 1 >= 2 * g - 1 + (m + 1), "psi rule: first summand leaves range at " + p.key());

  XiPairing t2{g, n, m, cm, p.b, {}};
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  r.terms.push_back({MultiPoly::constant(A, -1), {{t2, leg_forms(A, all)}}});
  claim(t2.degree() == d + 1, "psi rule: second summand degree at " + p.key());

  for (const auto& J : subsets(rest)) {
    std::vector<int> I{i}, Ic;
    I.insert(I.end(), J.begin(), J.end());
    std::sort(I.begin(), I.end());
    for (int j = 0; j < n; ++j)
      if (!std::binary_search(I.begin(), I.end(), j)) Ic.push_back(j);
    const int n1 = static_cast<int>(Ic.size()), n2 = static_cast<int>(I.size());
    MultiPoly aI = MultiPoly::var_sum(A, I);
    KernelPairing ker{0, n2, {}, 0, {}};
    for (int j : I) ker.d.push_back(cm[j]);
    for (int g1 = 0; g1 <= g; ++g1) {
      const int g2 = g - g1;
      if (2 * g2 - 1 + n2 <= 0) continue;
      ker.g = g2;
      if (2 * g1 - 1 + n1 + m <= 0) {
        // Xi^1_{0,1} on the unstable M_{0,2}: -a^{-1}, which cancels a_I
        if (g1 == 0 && n1 == 0 && m == 1) {
          KernelPairing ex{g2, n2, ker.d, p.b[0], {}};
          r.terms.push_back({MultiPoly::constant(A, -1), {{ex, leg_forms(A, I)}}});
        }
        continue;
      }
      XiPairing t3{g1, n1 + 1, m, {}, p.b, {}};
      for (int j : Ic) t3.c.push_back(p.c[j]);
      t3.c.push_back(0);
      std::vector<MultiPoly> f3 = leg_forms(A, Ic);
      f3.push_back(aI);
      r.terms.push_back({aI, {{t3, f3}, {ker, leg_forms(A, I)}}});
      // the kernel factor is nonzero only when its dimension matches
      if (sum(ker.d) == g2 - 2 + n2) {
        claim(t3.degree() == d - 2 * g2, "psi rule: splitting degree at " + p.key());
        if (in_range) claim(d - 2 * g2 >= 2 * g1 - 1 + m, "psi rule: splitting leaves range at " + p.key());
      }
    }
  }
  return r;
}

Rewrite ReductionEngine::pullback(const TestClass& t) { return pullback_as(t, 0); }

Rewrite ReductionEngine::pullback_as(const TestClass& t, int shape) {
  const auto* dv = std::get_if<DivisorTestClass>(&t.shape);
  if (!dv) throw std::invalid_argument("pullback: not a boundary class");
  auto expect = [&](int got) {
    if (shape != 0 && shape != got)
      throw InvalidSplit("pullback: " + t.encode() + " needs the rho" + std::to_string(got) + " rule");
  };
  const int g = t.g, n = t.n, m = t.m, N = n + m, d = t.xi_degree();
  const bool in_range = d >= 2 * g - 1 + m;
  Rewrite r;
  r.vars = vars_a(n);
  const VarList& A = r.vars;
  const std::string where = t.encode();
  if (!dv->separating) {
    expect(1);
    if (g < 1) throw std::invalid_argument("pullback: non-separating node needs g >= 1");
    r.rule = "rho1";
    XiPairing q{g - 1, n, m + 2, {}, {}, dv->kappa1};
    for (int j = 0; j < N + 2; ++j) (j < n ? q.c : q.b).push_back(dv->exps1[j]);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    r.terms.push_back({MultiPoly::constant(A, 1), {{q, leg_forms(A, all)}}});
    claim(q.degree() == d, "rho1 degree at " + where);
    if (in_range) claim(d >= 2 * (g - 1) - 1 + (m + 2), "rho1 leaves range at " + where);
    return r;
  }
  Side s[2];
  s[0].genus = dv->g1;
  s[1].genus = g - dv->g1;
  int pos[2] = {0, 0};
  for (int p = 0; p < N; ++p) {
    const int k = dv->side[p];
    const int e = (k == 0 ? dv->exps1 : dv->exps2)[pos[k]++];
    if (p < n) {
      s[k].regular.push_back(p);
      s[k].rexp.push_back(e);
    } else {
      s[k].frozen.push_back(p);
      s[k].fexp.push_back(e);
    }
  }
  s[0].node = dv->exps1.back();
  s[1].node = dv->exps2.back();
  s[0].kappa = dv->kappa1;
  s[1].kappa = dv->kappa2;
  auto nreg = [](const Side& x) { return static_cast<int>(x.regular.size()); };
  auto nfro = [](const Side& x) { return static_cast<int>(x.frozen.size()); };

  if (nfro(s[0]) >= 1 && nfro(s[1]) >= 1) {
    expect(2);
    r.rule = "rho2";
    XiPairing q[2];
    for (int k = 0; k < 2; ++k) {
      q[k] = {s[k].genus, nreg(s[k]), nfro(s[k]) + 1, s[k].rexp, s[k].fexp, s[k].kappa};
      q[k].b.push_back(s[k].node);
    }
    r.terms.push_back({MultiPoly::constant(A, 1), {{q[0], leg_forms(A, s[0].regular)}, {q[1], leg_forms(A, s[1].regular)}}});
    claim(q[0].degree() + q[1].degree() == d, "rho2 degree split at " + where);
    if (in_range)
      claim(q[0].degree() >= 2 * s[0].genus - 1 + nfro(s[0]) + 1 || q[1].degree() >= 2 * s[1].genus - 1 + nfro(s[1]) + 1,
            "rho2 leaves range at " + where);
    return r;
  }
  expect(3);
  r.rule = "rho3";
  const Side& a = nfro(s[0]) ? s[0] : s[1];  // carries every frozen leg
  const Side& b = nfro(s[0]) ? s[1] : s[0];
  r.args = "g1=" + std::to_string(a.genus) + " g2=" + std::to_string(b.genus);
  XiPairing qa{a.genus, nreg(a), m + 1, a.rexp, a.fexp, a.kappa};
  qa.b.push_back(a.node);
  XiPairing qb{b.genus, nreg(b), 1, b.rexp, {b.node}, b.kappa};
  r.terms.push_back({MultiPoly::constant(A, 1), {{qa, leg_forms(A, a.regular)}, {qb, leg_forms(A, b.regular)}}});
  claim(qa.degree() + qb.degree() == d, "rho3 degree split at " + where);
  if (in_range)
    claim(qa.degree() >= 2 * a.genus - 1 + (m + 1) || qb.degree() >= 2 * b.genus - 1 + 1, "rho3 first summand leaves range at " + where);
  if (nreg(b) >= 1) {
    KernelPairing ker{b.genus, nreg(b), b.rexp, b.node, b.kappa};
    XiPairing qc{a.genus, nreg(a) + 1, m, a.rexp, a.fexp, a.kappa};
    qc.c.push_back(a.node);
    std::vector<MultiPoly> fc = leg_forms(A, a.regular);
    fc.push_back(MultiPoly::var_sum(A, b.regular));
    r.terms.push_back({MultiPoly::constant(A, 1), {{qc, fc}, {ker, leg_forms(A, b.regular)}}});
    if (sum(b.rexp) + b.node + sum(b.kappa) == b.genus - 2 + nreg(b)) {
      claim(qc.degree() == d - 2 * b.genus, "rho3 second summand degree at " + where);
      if (in_range) claim(d - 2 * b.genus >= 2 * a.genus - 1 + m, "rho3 second summand leaves range at " + where);
    }
  }
  return r;
}

std::vector<std::pair<Rational, TestClass>> ReductionEngine::psi_to_boundary(const TestClass& t, bool last) {
  const auto* ps = std::get_if<PsiTestClass>(&t.shape);
  if (!ps) throw std::invalid_argument("psi_to_boundary: not a psi class");
  if (t.g > 1) throw std::invalid_argument("psi_to_boundary: genus 0 and 1 only");
  const int N = t.n + t.m;
  int p = -1;
  for (int j = 0; j < N; ++j)
    if (ps->exps[j] > 0 && (p < 0 || last)) p = j;
  if (p < 0) throw std::invalid_argument("psi_to_boundary: no psi power");
  std::vector<int> ex = ps->exps;
  --ex[p];
  std::vector<std::pair<Rational, TestClass>> out;
  const int l = static_cast<int>(ps->kappa.size());

  auto add_sep = [&](const std::vector<int>& S, int g1) {
    for (int mask = 0; mask < (1 << l); ++mask) {
      DivisorTestClass dv;
      dv.g1 = g1;
      dv.side.assign(N, 1);
      for (int j : S) dv.side[j] = 0;
      for (int j = 0; j < N; ++j) (dv.side[j] == 0 ? dv.exps1 : dv.exps2).push_back(ex[j]);
      dv.exps1.push_back(0);
      dv.exps2.push_back(0);
      for (int q = 0; q < l; ++q) (mask >> q & 1 ? dv.kappa2 : dv.kappa1).push_back(ps->kappa[q]);
      out.push_back({Rational(1), TestClass{t.g, t.n, t.m, dv}});
    }
  };

  std::vector<int> others;
  for (int j = 0; j < N; ++j)
    if (j != p) others.push_back(j);
  if (t.g == 0) {
    if (others.size() < 2) return out;
    int q = last ? others[others.size() - 1] : others[0];
    int r2 = last ? others[others.size() - 2] : others[1];
    std::vector<int> free;
    for (int j : others)
      if (j != q && j != r2) free.push_back(j);
    for (const auto& extra : subsets(free)) {
      if (extra.empty()) continue;
      std::vector<int> S{p};
      S.insert(S.end(), extra.begin(), extra.end());
      add_sep(S, 0);
    }
    return out;
  }
  // genus 1: psi_p = delta_irr / 12 + sum_{S containing p, |S| >= 2} delta_{0,S}
  DivisorTestClass irr;
  irr.separating = false;
  irr.exps1 = ex;
  irr.exps1.push_back(0);
  irr.exps1.push_back(0);
  irr.kappa1 = ps->kappa;
  out.push_back({Rational(1, 24), TestClass{t.g, t.n, t.m, irr}});
  for (const auto& extra : subsets(others)) {
    if (extra.empty()) continue;
    std::vector<int> S{p};
    S.insert(S.end(), extra.begin(), extra.end());
    add_sep(S, 0);
  }
  return out;
}

MultiPoly ReductionEngine::evaluate(const TestClass& t, Route route, std::string* trace) {
  VarList A = vars_a(t.n);
  if (t.xi_degree() < 0) {
    if (trace) *trace = "(zero dimension)";
    return MultiPoly(A);
  }
  auto how_of = [](Route r) {
    switch (r) {
      case Route::PsiAscending:
      case Route::RulePsiAscending: return Evaluation::PsiAscending;
      case Route::PsiDescending:
      case Route::RulePsiDescending: return Evaluation::PsiDescending;
      default: return Evaluation::Direct;
    }
  };
  if (const auto* ps = std::get_if<PsiTestClass>(&t.shape)) {
    XiPairing x{t.g, t.n, t.m, {}, {}, ps->kappa};
    for (int j = 0; j < t.n + t.m; ++j) (j < t.n ? x.c : x.b).push_back(ps->exps[j]);
    switch (route) {
      case Route::Direct:
      case Route::PsiAscending:
      case Route::PsiDescending: {
        Evaluation how = how_of(route);
        if (trace) {
          bool psi_free = std::all_of(x.c.begin(), x.c.end(), [](int c) { return c == 0; });
          if (!x.kappa.empty())
            *trace = kappa_reduce(x).sexp();
          else if (how == Evaluation::Direct || psi_free)
            *trace = "(direct " + req_sexp(x) + ")";
          else {
            int i = -1;
            for (int j = 0; j < x.n; ++j)
              if (x.c[j] > 0 && (i < 0 || how == Evaluation::PsiDescending)) i = j;
            *trace = regular_psi_reduce(x, i).sexp();
          }
        }
        return evaluate(x, how);
      }
      case Route::BoundaryFirst:
      case Route::BoundaryLast: {
        MultiPoly total(A);
        std::string tr = "(psi-boundary";
        for (const auto& [c, div] : psi_to_boundary(t, route == Route::BoundaryLast)) {
          total += evaluate(div, Route::RuleDirect) * c;
          if (trace) tr += " (term " + to_string(c) + " \"" + div.encode() + "\")";
        }
        if (trace) *trace = tr + ")";
        return total;
      }
      default: throw std::invalid_argument("route " + to_string(route) + " does not apply to psi classes");
    }
  }
  if (route != Route::RuleDirect && route != Route::RulePsiAscending && route != Route::RulePsiDescending)
    throw std::invalid_argument("route " + to_string(route) + " does not apply to boundary classes");
  Rewrite rw = pullback(t);
  if (trace) *trace = rw.sexp();
  return evaluate(rw, how_of(route));
}

std::vector<TestClass> generate_corpus(int max_g, int max_n, int max_m) {
  std::vector<TestClass> out;
  const std::vector<std::vector<int>> kappas{{}, {0}, {1}};
  for (int g = 0; g <= max_g; ++g)
    for (int n = 1; n <= max_n; ++n)
      for (int m = 1; m <= max_m; ++m) {
        const int N = n + m;
        if (2 * g - 2 + N <= 0) continue;
        const int dim = 3 * g - 3 + N;
        // psi^{<=2} at every point, at most one kappa
        for (int s = 0; s <= std::min(dim, 2 * N); ++s)
          for (const auto& ex : compositions(s, N)) {
            if (std::any_of(ex.begin(), ex.end(), [](int e) { return e > 2; })) continue;
            for (const auto& k : kappas) {
              TestClass t{g, n, m, PsiTestClass{ex, k}};
              if (t.class_degree() == 0 || t.class_degree() > dim) continue;
              out.push_back(t);
            }
          }
        // single-node graphs, psi^{<=2} at each point and node, at most one kappa
        if (g >= 1) {
          for (int s = 0; s <= dim - 1; ++s)
            for (const auto& ex : compositions(s, N + 2)) {
              if (std::any_of(ex.begin(), ex.end(), [](int e) { return e > 2; })) continue;
              for (const auto& k : kappas) {
                DivisorTestClass dv;
                dv.separating = false;
                dv.exps1 = ex;
                dv.kappa1 = k;
                TestClass t{g, n, m, dv};
                if (t.class_degree() <= dim) out.push_back(t);
              }
            }
        }
        for (int mask = 0; mask < (1 << N); ++mask) {
          if (mask & 1) continue;  // point 1 always on side 0
          std::vector<int> side(N);
          int k1 = 0;
          for (int j = 0; j < N; ++j) k1 += side[j] = mask >> j & 1;
          const int k0 = N - k1;
          for (int g1 = 0; g1 <= g; ++g1) {
            if (2 * g1 - 1 + k0 <= 0 || 2 * (g - g1) - 1 + k1 <= 0) continue;
            for (int s = 0; s <= dim - 1; ++s)
              for (const auto& ex : compositions(s, N + 2)) {
                if (std::any_of(ex.begin(), ex.end(), [](int e) { return e > 2; })) continue;
                for (int kside = 0; kside < 2; ++kside)
                  for (const auto& k : kappas) {
                    if (kside == 1 && k.empty()) continue;
                    DivisorTestClass dv;
                    dv.g1 = g1;
                    dv.side = side;
                    dv.exps1.assign(ex.begin(), ex.begin() + k0 + 1);
                    dv.exps2.assign(ex.begin() + k0 + 1, ex.end());
                    (kside == 0 ? dv.kappa1 : dv.kappa2) = k;
                    TestClass t{g, n, m, dv};
                    if (t.class_degree() <= dim) out.push_back(t);
                  }
              }
          }
        }
      }
  return out;
}

std::vector<TestClass> parse_corpus(std::string_view text) {
  std::vector<TestClass> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(TestClass::parse(line));
    } catch (const ParseError& e) {
      throw ParseError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string render_corpus(const std::vector<TestClass>& corpus) {
  std::string s = "# reduction corpus v1: decorated test classes, one per line\n";
  for (const auto& t : corpus) s += t.encode() + "\n";
  return s;
}

ConfluenceEntry check_confluence(ReductionEngine& engine, const TestClass& t, bool with_traces) {
  ConfluenceEntry e;
  e.cls = t;
  for (Route r : routes_for(t)) {
    std::string tr;
    MultiPoly v = engine.evaluate(t, r, with_traces ? &tr : nullptr);
    if (!e.values.empty() && !(v == e.values.front().second)) e.agree = false;
    e.values.emplace_back(r, v);
    if (with_traces) e.traces.push_back("(route " + to_string(r) + " " + tr + ")");
  }
  return e;
}

}  // namespace tautrel
