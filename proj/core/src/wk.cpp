#include "tautrel/wk.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <mutex>
#include <shared_mutex>

#include "tautrel/errors.hpp"

namespace tautrel {

namespace {

using Key = std::pair<int, std::vector<int>>;

std::shared_mutex memo_mu;
std::map<Key, Rational> memo;

Rational wk_sorted(int g, std::vector<int> d);

Rational lookup(int g, std::vector<int> d) {
  std::sort(d.begin(), d.end(), std::greater<int>());
  return wk_sorted(g, std::move(d));
}

// d is sorted in decreasing order.
Rational compute(int g, const std::vector<int>& d) {
  const int n = static_cast<int>(d.size());
  if (g == 0 && n == 3) return 1;
  if (g == 1 && n == 1) return make_rational(1, 24);

  // String equation: remove a psi^0 point.
  if (d.back() == 0) {
    std::vector<int> rest(d.begin(), d.end() - 1);
    if (2 * g - 2 + static_cast<int>(rest.size()) <= 0) return 0;
    Rational s = 0;
    for (size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] == 0) continue;
      auto r = rest;
      r[j] -= 1;
      s += lookup(g, r);
    }
    return s;
  }
  // Dilaton equation.
  auto one = std::find(d.begin(), d.end(), 1);
  if (one != d.end()) {
    std::vector<int> rest(d.begin(), one);
    rest.insert(rest.end(), one + 1, d.end());
    return Rational(2 * g - 2 + static_cast<int>(rest.size())) * lookup(g, rest);
  }

  // Dijkgraaf-Verlinde-Verlinde on the largest exponent k+1.
  const int k = d[0] - 1;
  std::vector<int> rest(d.begin() + 1, d.end());
  const int m = static_cast<int>(rest.size());
  Rational s = 0;
  for (int j = 0; j < m; ++j) {
    auto r = rest;
    r[j] += k;
    Rational c(double_factorial(2 * k + 2 * rest[j] + 1), double_factorial(2 * rest[j] - 1));
    c.canonicalize();
    s += c * lookup(g, r);
  }
  for (int a = 0; a < k; ++a) {
    int b = k - 1 - a;
    Rational c(double_factorial(2 * a + 1) * double_factorial(2 * b + 1), 2);
    c.canonicalize();
    if (g >= 1) {
      std::vector<int> r = rest;
      r.push_back(a);
      r.push_back(b);
      s += c * lookup(g - 1, r);
    }
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<int> I{a}, J{b};
      for (int t = 0; t < m; ++t) (mask >> t & 1 ? I : J).push_back(rest[t]);
      for (int g1 = 0; g1 <= g; ++g1) {
        int g2 = g - g1;
        if (2 * g1 - 2 + static_cast<int>(I.size()) <= 0 || 2 * g2 - 2 + static_cast<int>(J.size()) <= 0) continue;
        Rational x = lookup(g1, I);
        if (x == 0) continue;
        s += c * x * lookup(g2, J);
      }
    }
  }
  Rational den(double_factorial(2 * k + 3));
  return s / den;
}

Rational wk_sorted(int g, std::vector<int> d) {
  const int n = static_cast<int>(d.size());
  if (g < 0 || 2 * g - 2 + n <= 0) throw UnstableTarget("wk: unstable (g=" + std::to_string(g) + ", k=" + std::to_string(n) + ")");
  if (!d.empty() && d.back() < 0) return 0;
  if (std::accumulate(d.begin(), d.end(), 0) != 3 * g - 3 + n) return 0;
  Key key{g, d};
  {
    std::shared_lock<std::shared_mutex> lock(memo_mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  Rational v = compute(g, d);
  std::unique_lock<std::shared_mutex> lock(memo_mu);
  memo.emplace(std::move(key), v);
  return v;
}

}  // namespace

Rational wk_integral(int g, const std::vector<int>& exponents) { return lookup(g, exponents); }

Rational wk_or_zero(int g, const std::vector<int>& exponents) {
  if (g < 0 || 2 * g - 2 + static_cast<int>(exponents.size()) <= 0) return 0;
  return lookup(g, exponents);
}

std::vector<std::pair<std::pair<int, std::vector<int>>, Rational>> wk_memo_snapshot() {
  std::shared_lock<std::shared_mutex> lock(memo_mu);
  return {memo.begin(), memo.end()};
}

Rational wk_genus0_closed(const std::vector<int>& exponents) {
  const int k = static_cast<int>(exponents.size());
  if (k < 3) throw UnstableTarget("genus 0 needs k >= 3");
  int sum = 0;
  for (int d : exponents) {
    if (d < 0) return 0;
    sum += d;
  }
  if (sum != k - 3) return 0;
  Integer den = 1;
  for (int d : exponents) den *= factorial(d);
  Rational r(factorial(k - 3), den);
  r.canonicalize();
  return r;
}

}  // namespace tautrel
