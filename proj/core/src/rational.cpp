#include "tautrel/rational.hpp"

#include "tautrel/errors.hpp"

namespace tautrel {

Rational make_rational(long num, long den) {
  if (den == 0) throw ZeroDenominator("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view s) {
  if (s.empty()) throw ParseError("empty rational");
  auto digits_ok = [](std::string_view t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!digits_ok(num) || !digits_ok(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("bad rational: " + std::string(s));
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  Integer zn(n), zd{std::string(den)};
  if (zd == 0) throw ZeroDenominator("zero denominator in " + std::string(s));
  Rational q(zn, zd);
  q.canonicalize();
  return q;
}

Integer factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Integer double_factorial(int n) {
  Integer r = 1;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

}  // namespace tautrel
