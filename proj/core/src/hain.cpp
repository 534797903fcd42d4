#include "tautrel/hain.hpp"

#include <stdexcept>

#include "tautrel/errors.hpp"

namespace tautrel {

namespace {

Rational hodge_top(int g) {
  switch (g) {
    case 0: return 1;
    case 1: return Rational(1, 24);
    case 2: return Rational(7, 5760);
  }
  throw UncalibratedBase("hain oracle: genus > 2");
}

// int over M_{g,N} of lambda_g prod psi^e
Rational lam(int g, const std::vector<int>& ex) {
  const int N = static_cast<int>(ex.size());
  if (2 * g - 2 + N <= 0) return 0;
  int s = 0;
  for (int e : ex) {
    if (e < 0) return 0;
    s += e;
  }
  if (s != 2 * g - 3 + N) return 0;
  Rational r(factorial(s));
  for (int e : ex) r /= Rational(factorial(e));
  return r * hodge_top(g);
}

struct Divisor {
  int h1;
  std::vector<int> S;  // contains point 0
  int h2;
  std::vector<int> T;
};

struct Ctx {
  int g;
  int npts;  // points 0..k
  std::vector<MultiPoly> w;
  std::vector<int> ex;
  VarList vars;

  std::vector<int> exps(const std::vector<int>& pts, const std::vector<int>& e, std::vector<int> extra = {}) const {
    std::vector<int> out;
    for (int p : pts) out.push_back(e[p]);
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  }
  std::vector<int> all() const {
    std::vector<int> v(npts);
    for (int i = 0; i < npts; ++i) v[i] = i;
    return v;
  }
  std::vector<int> bump(std::vector<int> e, int p) const {
    ++e[p];
    return e;
  }
  MultiPoly wd(const std::vector<int>& S) const {
    MultiPoly s(vars);
    for (int p : S) s += w[p];
    return s;
  }
  // Separating divisors, both sides nonempty, canonical side holds point 0.
  std::vector<Divisor> divisors() const {
    std::vector<Divisor> out;
    for (int mask = 1; mask < (1 << npts); mask += 2) {
      std::vector<int> S, T;
      for (int i = 0; i < npts; ++i) (mask >> i & 1 ? S : T).push_back(i);
      if (T.empty()) continue;
      for (int h = 0; h <= g; ++h) {
        if (2 * h - 1 + static_cast<int>(S.size()) > 0 && 2 * (g - h) - 1 + static_cast<int>(T.size()) > 0)
          out.push_back({h, S, g - h, T});
      }
    }
    return out;
  }
};

MultiPoly genus1(const Ctx& c) {
  MultiPoly r(c.vars);
  auto pts = c.all();
  for (int p : pts) r += (c.w[p] * c.w[p]) * (Rational(1, 2) * lam(1, c.exps(pts, c.bump(c.ex, p))));
  for (const auto& dv : c.divisors()) {
    Rational v = lam(dv.h1, c.exps(dv.S, c.ex, {0})) * lam(dv.h2, c.exps(dv.T, c.ex, {0}));
    if (v == 0) continue;
    MultiPoly s = c.wd(dv.S);
    r -= (s * s) * (Rational(1, 2) * v);
  }
  return r;
}

MultiPoly genus2(const Ctx& c) {
  auto pts = c.all();
  MultiPoly a2(c.vars), ab(c.vars), b2(c.vars);
  for (int p : pts)
    for (int q : pts) {
      Rational v = lam(2, c.exps(pts, c.bump(c.bump(c.ex, p), q)));
      if (v != 0) a2 += (c.w[p] * c.w[p] * c.w[q] * c.w[q]) * (v / 4);
    }
  auto divs = c.divisors();
  for (const auto& dv : divs) {
    MultiPoly s = c.wd(dv.S);
    MultiPoly s2 = s * s;
    for (int p : pts) {
      auto e = c.bump(c.ex, p);
      Rational v = lam(dv.h1, c.exps(dv.S, e, {0})) * lam(dv.h2, c.exps(dv.T, e, {0}));
      if (v != 0) ab += (s2 * c.w[p] * c.w[p]) * (v / 4);
    }
    // self-intersection: normal bundle -psi - psi'
    Rational v = -lam(dv.h1, c.exps(dv.S, c.ex, {1})) * lam(dv.h2, c.exps(dv.T, c.ex, {0})) -
                 lam(dv.h1, c.exps(dv.S, c.ex, {0})) * lam(dv.h2, c.exps(dv.T, c.ex, {1}));
    if (v != 0) b2 += (s2 * s2) * (v / 4);
  }
  // chains X - Y - Z from two distinct compatible divisors
  const int n = c.npts;
  std::vector<int> assign(n, 0);
  while (true) {
    std::vector<int> SX, SY, SZ;
    for (int i = 0; i < n; ++i) (assign[i] == 0 ? SX : assign[i] == 1 ? SY : SZ).push_back(i);
    if (!SX.empty() && !SZ.empty() && SX.front() < SZ.front()) {
      for (int gx = 0; gx <= 2; ++gx)
        for (int gy = 0; gy <= 2 - gx; ++gy) {
          int gz = 2 - gx - gy;
          if (2 * gx - 1 + static_cast<int>(SX.size()) <= 0 || 2 * gy + static_cast<int>(SY.size()) <= 0 ||
              2 * gz - 1 + static_cast<int>(SZ.size()) <= 0)
            continue;
          Rational v = lam(gx, c.exps(SX, c.ex, {0})) * lam(gy, c.exps(SY, c.ex, {0, 0})) *
                       lam(gz, c.exps(SZ, c.ex, {0}));
          if (v == 0) continue;
          MultiPoly x = c.wd(SX), z = c.wd(SZ);
          b2 += (x * x * z * z) * (v / 2);
        }
    }
    int i = 0;
    while (i < n && ++assign[i] == 3) assign[i++] = 0;
    if (i == n) break;
  }
  MultiPoly r = a2 - ab * Rational(2) + b2;
  return r * Rational(1, 2);
}

}  // namespace

MultiPoly hain_kernel(int g, int k, const std::vector<int>& d, int d0) {
  if (k < 1 || static_cast<int>(d.size()) != k) throw std::invalid_argument("hain_kernel: bad point count");
  Ctx c;
  c.g = g;
  c.npts = k + 1;
  c.vars = vars_x(k);
  std::vector<int> idx;
  for (int i = 0; i < k; ++i) idx.push_back(i);
  c.w.push_back(-MultiPoly::var_sum(c.vars, idx));
  for (int i = 0; i < k; ++i) c.w.push_back(MultiPoly::variable(c.vars, i));
  c.ex.push_back(d0);
  c.ex.insert(c.ex.end(), d.begin(), d.end());
  switch (g) {
    case 0: return MultiPoly::constant(c.vars, lam(0, c.ex));
    case 1: return genus1(c);
    case 2: return genus2(c);
  }
  throw UncalibratedBase("hain oracle: genus > 2");
}

}  // namespace tautrel
