#include "tautrel/classes.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/trees.hpp"
#include "tautrel/wk.hpp"

namespace tautrel {

namespace {

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

std::string triple(int g, int n, int m) {
  return "(" + std::to_string(g) + "," + std::to_string(n) + "," + std::to_string(m) + ")";
}

// Small power cache for one weight.
struct Powers {
  MultiPoly base;
  std::vector<MultiPoly> v;
  const MultiPoly& operator[](int e) {
    if (v.empty()) v.push_back(MultiPoly::constant(base.vars(), 1));
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * base);
    return v[e];
  }
};

}  // namespace

std::string to_string(ClassKind k) {
  switch (k) {
    case ClassKind::B: return "B";
    case ClassKind::A: return "A";
    case ClassKind::Xi: return "Xi";
    case ClassKind::Third: return "third";
  }
  return "?";
}

ClassKind parse_class_kind(std::string_view s) {
  if (s == "B") return ClassKind::B;
  if (s == "A") return ClassKind::A;
  if (s == "Xi") return ClassKind::Xi;
  if (s == "third") return ClassKind::Third;
  throw ParseError("unknown class '" + std::string(s) + "'");
}

MultiPoly psi_expand(int g, const std::vector<MultiPoly>& weights, const std::vector<int>& extra, int deg,
                     const std::vector<int>& fixed, const VarList& vars) {
  MultiPoly out(vars);
  if (deg < 0) return out;
  const int h = static_cast<int>(weights.size());
  std::vector<Powers> pw;
  for (const auto& w : weights) pw.push_back({w, {}});
  std::vector<int> ex(h + fixed.size());
  std::copy(fixed.begin(), fixed.end(), ex.begin() + h);
  for (const auto& comp : compositions(deg, h)) {
    for (int j = 0; j < h; ++j) ex[j] = comp[j] + (extra.empty() ? 0 : extra[j]);
    Rational v = wk_or_zero(g, ex);
    if (v == 0) continue;
    MultiPoly t = MultiPoly::constant(vars, v);
    for (int j = 0; j < h; ++j)
      if (comp[j]) t = t * pw[j][comp[j]];
    out += t;
  }
  return out;
}

MultiPoly pair_B(int g, int n, int m, const std::vector<int>& b) {
  if (n < 1 || m < 0 || static_cast<int>(b.size()) != m || 2 * g - 2 + n + m <= 0)
    throw UnstableTarget("pair_B: bad target " + triple(g, n, m));
  VarList A = vars_a(n);
  MultiPoly total(A);
  const int sb = sum(b);
  for (const auto& t : enumerate_srt(g, n, m)) {
    const int nv = t.size();
    DegreeLabeling p(nv);
    for (int i = 0; i < nv; ++i) p[i] = t.dim(i) - (i == 0 ? sb : 0);
    if (p[0] < 0) continue;
    MultiPoly term = MultiPoly::constant(A, 1);
    for (int i = 0; i < nv && !term.is_zero(); ++i) {
      std::vector<int> fixed = i == 0 ? b : std::vector<int>{0};
      term = term * psi_expand(t.vertex(i).genus, t.positive_weights(i, A), {}, p[i], fixed, A);
    }
    if (term.is_zero()) continue;
    int sign = level_sign_sum(t, p);
    if (sign == 0) continue;
    for (int i = 1; i < nv; ++i) term = term * t.vertex_weight(i, A);
    total += term * Rational(sign);
  }
  return total;
}

MultiPoly pair_A(int g, int n, int b, const KernelTable& kt, TreeCoefficient coeff) {
  if (n < 1 || b < 0 || 2 * g - 1 + n <= 0) throw UnstableTarget("pair_A: bad target " + triple(g, n, 1));
  VarList A = vars_a(n);
  MultiPoly total(A);
  for (const auto& t : enumerate_srt(g, n, 1)) {
    const int nv = t.size();
    MultiPoly term = MultiPoly::constant(A, coeff == TreeCoefficient::C1 ? coeff_c1(t) : coeff_c2(t));
    for (int i = 0; i < nv && !term.is_zero(); ++i) {
      const int gv = t.vertex(i).genus;
      const int k = t.positive_half_edges(i);
      const int d0 = i == 0 ? b : 0;
      if (d0 != gv - 2 + k) {
        term = MultiPoly(A);
        break;
      }
      term = term * kt.kernel_at(gv, k, std::vector<int>(k, 0), d0, t.positive_weights(i, A));
    }
    if (term.is_zero()) continue;
    for (int i = 1; i < nv; ++i) term = term * t.vertex_weight(i, A);
    total += term;
  }
  return total;
}

MultiPoly pair_Xi(int g, int n, int m, const std::vector<int>& b, const KernelTable& kt, const std::vector<int>& c_in,
                  EmptyLegs empty) {
  if (n < 0 || m < 1 || static_cast<int>(b.size()) != m || 2 * g - 2 + n + m <= 0)
    throw UnstableTarget("pair_Xi: bad target " + triple(g, n, m));
  std::vector<int> c = c_in.empty() ? std::vector<int>(n, 0) : c_in;
  if (static_cast<int>(c.size()) != n) throw std::invalid_argument("pair_Xi: regular exponents size");
  VarList A = vars_a(n);
  if (n == 0) {
    if (empty == EmptyLegs::Zero) return MultiPoly(A);
    return MultiPoly::constant(A, wk_or_zero(g, b));
  }
  std::vector<int> legs(n);
  std::iota(legs.begin(), legs.end(), 0);
  MultiPoly total(A);
  for (const auto& part : set_partitions(legs)) {
    const int s = static_cast<int>(part.size());
    for (const auto& gs : compositions(g, s + 1)) {
      const int gr = gs[0];
      if (gr == 0 && m == 1 && s == 1) {
        // unstable root: contract it, the node takes the frozen leg's place
        const auto& L = part[0];
        const int gv = gs[1];
        if (gv == 0 && L.size() == 1) continue;
        std::vector<MultiPoly> ws;
        std::vector<int> dd;
        for (int j : L) {
          ws.push_back(MultiPoly::variable(A, j));
          dd.push_back(c[j]);
        }
        const int k = static_cast<int>(L.size());
        const int d0 = gv - 2 + k - sum(dd);
        const int e = d0 - b[0];
        if (e < 0) continue;
        MultiPoly av = MultiPoly::var_sum(A, L);
        total -= pow(av, e) * kt.kernel_at(gv, k, dd, d0, ws);
        continue;
      }
      MultiPoly term = MultiPoly::constant(A, 1);
      std::vector<MultiPoly> rw;
      std::vector<int> rextra;
      for (int j = 0; j < s && !term.is_zero(); ++j) {
        const auto& L = part[j];
        const int gv = gs[j + 1];
        if (gv == 0 && L.size() == 1) {
          // unstable satellite: its leg sits on the root directly
          rw.push_back(MultiPoly::variable(A, L[0]));
          rextra.push_back(c[L[0]]);
          continue;
        }
        std::vector<MultiPoly> ws;
        std::vector<int> dd;
        for (int t : L) {
          ws.push_back(MultiPoly::variable(A, t));
          dd.push_back(c[t]);
        }
        const int k = static_cast<int>(L.size());
        const int d0 = gv - 2 + k - sum(dd);
        if (d0 < 0) {
          term = MultiPoly(A);
          break;
        }
        MultiPoly av = MultiPoly::var_sum(A, L);
        term = term * pow(av, d0 + 1) * kt.kernel_at(gv, k, dd, d0, ws);
        rw.push_back(av);
        rextra.push_back(0);
      }
      if (term.is_zero()) continue;
      const int dimr = 3 * gr - 3 + static_cast<int>(rw.size()) + m;
      const int deg = dimr - sum(b) - sum(rextra);
      if (deg < 0) continue;
      MultiPoly root = psi_expand(gr, rw, rextra, deg, b, A);
      if (deg % 2) root = -root;
      total += term * root;
    }
  }
  return total;
}

MultiPoly pair_third(int g, int n, const KernelTable& kt) {
  if (n < 1 || 2 * g - 2 + n <= 0) throw UnstableTarget("pair_third: bad target " + triple(g, n, 0));
  MultiPoly a = pair_A(g, n, 0, kt);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return pair_B(g, n, 0, {}) - exact_div_linear(a, MultiPoly::var_sum(vars_a(n), all));
}

void validate(const PairingRequest& r) {
  auto bad = [&](const std::string& why) { throw std::invalid_argument(to_string(r.kind) + " request: " + why); };
  if (r.g < 0 || r.n < 1) bad("need g >= 0, n >= 1");
  if (r.n > kMaxVars) bad("too many legs");
  for (int x : r.b)
    if (x < 0) bad("negative psi exponent");
  if (static_cast<int>(r.b.size()) != r.m) bad("b must have m entries");
  switch (r.kind) {
    case ClassKind::B:
      if (r.m < 0) bad("m >= 0");
      if (2 * r.g - 2 + r.n + r.m <= 0) throw UnstableTarget("unstable target " + triple(r.g, r.n, r.m));
      break;
    case ClassKind::A:
      if (r.m != 1) bad("A needs m = 1");
      if (2 * r.g - 1 + r.n <= 0) throw UnstableTarget("unstable target " + triple(r.g, r.n, r.m));
      break;
    case ClassKind::Xi:
      if (r.m < 1) bad("Xi needs m >= 1");
      if (2 * r.g - 2 + r.n + r.m <= 0) throw UnstableTarget("unstable target " + triple(r.g, r.n, r.m));
      break;
    case ClassKind::Third:
      if (r.m != 0) bad("third needs m = 0");
      if (2 * r.g - 2 + r.n <= 0) throw UnstableTarget("unstable target " + triple(r.g, r.n, r.m));
      break;
  }
}

int expected_degree(const PairingRequest& r) {
  validate(r);
  const int dim = 3 * r.g - 3 + r.n + r.m;
  return r.kind == ClassKind::Third ? dim : dim - sum(r.b);
}

PairingResult evaluate(const PairingRequest& r, const KernelTable& kt) {
  PairingResult out;
  out.degree = expected_degree(r);
  switch (r.kind) {
    case ClassKind::B: out.poly = pair_B(r.g, r.n, r.m, r.b); break;
    case ClassKind::A: out.poly = pair_A(r.g, r.n, r.b[0], kt); break;
    case ClassKind::Xi:
      out.poly = pair_Xi(r.g, r.n, r.m, r.b, kt);
      out.u_exp = 2 * r.g - 2 + r.m - out.degree;
      break;
    case ClassKind::Third: out.poly = pair_third(r.g, r.n, kt); break;
  }
  if (out.poly.is_zero()) out.poly = MultiPoly(vars_a(r.n));
  if (!out.poly.is_zero()) {
    if (!out.poly.is_homogeneous() || out.poly.degree() != out.degree)
      throw Error("pairing not homogeneous of degree " + std::to_string(out.degree) + ": " + out.poly.to_string());
    if (out.u_exp && (*out.u_exp < -r.g + 1 - r.n || *out.u_exp > 2 * r.g - 2 + r.m))
      throw Error("u exponent out of range");
  }
  return out;
}

std::string cache_key(const PairingRequest& r) {
  std::string s = "P|" + to_string(r.kind) + "|" + std::to_string(r.g) + "|" + std::to_string(r.n) + "|" +
                  std::to_string(r.m) + "|";
  for (size_t i = 0; i < r.b.size(); ++i) s += (i ? "," : "") + std::to_string(r.b[i]);
  return s;
}

std::string render(const PairingResult& r) {
  std::string s = r.poly.to_string();
  if (r.u_exp) s += " (u^" + std::to_string(*r.u_exp) + ")";
  return s;
}

std::string to_json(const PairingRequest& r) {
  nlohmann::ordered_json j;
  j["class"] = to_string(r.kind);
  j["g"] = r.g;
  j["n"] = r.n;
  j["m"] = r.m;
  j["b"] = r.b;
  return j.dump();
}

std::string to_json(const PairingResult& r) {
  nlohmann::ordered_json j;
  j["degree"] = r.degree;
  j["u_exp"] = r.u_exp ? nlohmann::ordered_json(*r.u_exp) : nlohmann::ordered_json(nullptr);
  j["poly"] = r.poly.to_string();
  return j.dump();
}

PairingRequest request_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pairing request: ") + e.what());
  }
  PairingRequest r;
  try {
    r.kind = parse_class_kind(j.at("class").get<std::string>());
    r.g = j.at("g").get<int>();
    r.n = j.at("n").get<int>();
    r.b = j.value("b", std::vector<int>{});
    r.m = j.value("m", static_cast<int>(r.b.size()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pairing request: ") + e.what());
  }
  validate(r);
  return r;
}

}  // namespace tautrel
