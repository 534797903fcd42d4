#include "tautrel/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"

namespace tautrel {

RootedTree::RootedTree(std::vector<TreeVertex> vertices, int frozen, int regular)
    : v_(std::move(vertices)), m_(frozen), n_(regular) {}

int RootedTree::total_genus() const {
  int g = 0;
  for (const auto& x : v_) g += x.genus;
  return g;
}

int RootedTree::half_edges(int i) const {
  const auto& x = v_[i];
  return static_cast<int>(x.legs.size() + x.children.size()) + (x.parent < 0 ? m_ : 1);
}

int RootedTree::positive_half_edges(int i) const {
  return static_cast<int>(v_[i].legs.size() + v_[i].children.size());
}

int RootedTree::dchi(int i) const {
  int s = chi(i);
  for (int c : v_[i].children) s += dchi(c);
  return s;
}

std::vector<int> RootedTree::descendant_legs(int i) const {
  std::vector<int> out = v_[i].legs;
  for (int c : v_[i].children) {
    auto sub = descendant_legs(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> RootedTree::descendant_vertices(int i) const {
  std::vector<int> out{i};
  for (int c : v_[i].children) {
    auto sub = descendant_vertices(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

MultiPoly RootedTree::vertex_weight(int i, const VarList& vars) const {
  std::vector<int> idx;
  for (int l : descendant_legs(i)) idx.push_back(l - 1);
  return MultiPoly::var_sum(vars, idx);
}

std::vector<MultiPoly> RootedTree::positive_weights(int i, const VarList& vars) const {
  std::vector<MultiPoly> out;
  for (int l : v_[i].legs) out.push_back(MultiPoly::variable(vars, l - 1));
  for (int c : v_[i].children) out.push_back(vertex_weight(c, vars));
  return out;
}

std::string RootedTree::encode() const {
  std::function<std::string(int)> rec = [&](int i) {
    const auto& x = v_[i];
    std::string s = "v(g=" + std::to_string(x.genus) + ";";
    if (x.parent < 0) s += "F=" + std::to_string(m_) + ";";
    s += "L=";
    for (size_t j = 0; j < x.legs.size(); ++j) s += (j ? "," : "") + std::to_string(x.legs[j]);
    if (!x.children.empty()) {
      s += ";[";
      for (size_t j = 0; j < x.children.size(); ++j) s += (j ? "," : "") + rec(x.children[j]);
      s += "]";
    }
    return s + ")";
  };
  return v_.empty() ? std::string() : rec(0);
}

bool RootedTree::is_stable() const {
  for (int i = 0; i < size(); ++i)
    if (chi(i) <= 0) return false;
  return true;
}

namespace {

struct Node {
  int genus;
  std::vector<int> legs;
  std::vector<Node> children;
};

int min_leg(const Node& t) {
  int m = t.legs.empty() ? 1 << 30 : t.legs.front();
  for (const auto& c : t.children) m = std::min(m, min_leg(c));
  return m;
}

// All rooted trees on leg set L with total genus G whose root carries
// `neg` negative half-edges. Every child subtree carries at least one leg.
std::vector<Node> build(const std::vector<int>& L, int G, int neg,
                        std::map<std::tuple<std::vector<int>, int, int>, std::vector<Node>>& memo) {
  auto key = std::make_tuple(L, G, neg);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::vector<Node> res;
  const size_t n = L.size();
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<int> R, rest;
    for (size_t i = 0; i < n; ++i) (mask >> i & 1 ? R : rest).push_back(L[i]);
    for (const auto& part : set_partitions(rest)) {
      const int s = static_cast<int>(part.size());
      for (const auto& gs : compositions(G, s + 1)) {
        const int gr = gs[0];
        if (2 * gr - 2 + static_cast<int>(R.size()) + s + neg <= 0) continue;
        std::vector<std::vector<Node>> subs;
        bool empty = false;
        for (int j = 0; j < s; ++j) {
          subs.push_back(build(part[j], gs[j + 1], 1, memo));
          if (subs.back().empty()) empty = true;
        }
        if (empty) continue;
        std::vector<size_t> pick(s, 0);
        while (true) {
          Node t{gr, R, {}};
          for (int j = 0; j < s; ++j) t.children.push_back(subs[j][pick[j]]);
          std::sort(t.children.begin(), t.children.end(),
                    [](const Node& a, const Node& b) { return min_leg(a) < min_leg(b); });
          res.push_back(std::move(t));
          int j = s - 1;
          while (j >= 0 && ++pick[j] == subs[j].size()) pick[j--] = 0;
          if (j < 0) break;
        }
      }
    }
  }
  memo.emplace(key, res);
  return res;
}

void flatten(const Node& t, int parent, std::vector<TreeVertex>& out) {
  int idx = static_cast<int>(out.size());
  out.push_back(TreeVertex{t.genus, parent, t.legs, {}});
  for (const auto& c : t.children) {
    int ci = static_cast<int>(out.size());
    out[idx].children.push_back(ci);
    flatten(c, idx, out);
  }
}

}  // namespace

std::vector<RootedTree> enumerate_srt(int g, int n, int m) {
  if (g < 0 || n < 0 || m < 0 || 2 * g - 2 + n + m <= 0)
    throw UnstableTarget("srt: unstable (" + std::to_string(g) + "," + std::to_string(n) + "," + std::to_string(m) + ")");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<RootedTree>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find({g, n, m}); it != cache.end()) return it->second;
  std::vector<int> L;
  for (int i = 1; i <= n; ++i) L.push_back(i);
  std::map<std::tuple<std::vector<int>, int, int>, std::vector<Node>> memo;
  std::vector<RootedTree> out;
  for (const auto& t : build(L, g, m, memo)) {
    std::vector<TreeVertex> vs;
    flatten(t, -1, vs);
    out.emplace_back(std::move(vs), m, n);
  }
  std::vector<std::pair<std::pair<int, std::string>, size_t>> keys;
  for (size_t i = 0; i < out.size(); ++i) keys.push_back({{out[i].size(), out[i].encode()}, i});
  std::sort(keys.begin(), keys.end());
  std::vector<RootedTree> sorted;
  for (const auto& k : keys) sorted.push_back(out[k.second]);
  cache.emplace(std::make_tuple(g, n, m), sorted);
  return sorted;
}

bool is_admissible_level(const RootedTree& t, const DegreeLabeling& p, const LevelFunction& l) {
  const int nv = t.size();
  if (static_cast<int>(l.size()) != nv || static_cast<int>(p.size()) != nv) return false;
  if (l[0] != 0) return false;
  for (int i = 0; i < nv; ++i)
    for (int c : t.vertex(i).children)
      if (l[c] <= l[i]) return false;
  int mx = *std::max_element(l.begin(), l.end());
  std::vector<int> seen(mx + 1, 0);
  for (int x : l) {
    if (x < 0) return false;
    seen[x] = 1;
  }
  for (int x : seen)
    if (!x) return false;
  for (int lev = 0; lev < mx; ++lev) {
    int count = 0, psum = 0, gsum = 0;
    for (int i = 0; i < nv; ++i) {
      if (l[i] > lev) continue;
      ++count;
      psum += p[i];
      gsum += t.vertex(i).genus;
    }
    if (count - 1 + psum > 2 * gsum - 2 + t.frozen()) return false;
  }
  return true;
}

std::vector<LevelFunction> admissible_levels(const RootedTree& t, const DegreeLabeling& p) {
  const int nv = t.size();
  std::vector<LevelFunction> out;
  LevelFunction l(nv, 0);
  // Preorder guarantees the parent is assigned first.
  std::function<void(int)> rec = [&](int i) {
    if (i == nv) {
      if (is_admissible_level(t, p, l)) out.push_back(l);
      return;
    }
    for (int x = l[t.vertex(i).parent] + 1; x < nv; ++x) {
      l[i] = x;
      rec(i + 1);
    }
  };
  if (nv == 1) {
    out.push_back(l);
    return out;
  }
  rec(1);
  return out;
}

int level_sign_sum(const RootedTree& t, const DegreeLabeling& p) {
  int s = 0;
  for (const auto& l : admissible_levels(t, p)) {
    int mx = *std::max_element(l.begin(), l.end());
    s += (mx % 2 == 0) ? 1 : -1;
  }
  return s;
}

std::vector<LeveledTree> enumerate_ldlsrt(int g, int n, int m) {
  std::vector<LeveledTree> out;
  for (const auto& t : enumerate_srt(g, n, m)) {
    const int nv = t.size();
    DegreeLabeling p(nv, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == nv) {
        for (auto& l : admissible_levels(t, p)) out.push_back({t, p, l});
        return;
      }
      for (int x = 0; x <= t.dim(i); ++x) {
        p[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

std::string StarTree::encode() const {
  std::string s = "v(g=" + std::to_string(root_genus) + ";F=" + std::to_string(frozen) + ";L=";
  if (!satellites.empty()) {
    s += ";[";
    for (size_t j = 0; j < satellites.size(); ++j) {
      if (j) s += ",";
      s += "v(g=" + std::to_string(satellites[j].genus) + ";L=";
      for (size_t k = 0; k < satellites[j].legs.size(); ++k) s += (k ? "," : "") + std::to_string(satellites[j].legs[k]);
      s += ")";
    }
    s += "]";
  }
  return s + ")";
}

std::vector<StarTree> enumerate_pssrt(int g, int n, int m) {
  if (g < 0 || n < 1 || m < 1 || 2 * g - 2 + n + m <= 0) throw UnstableTarget("pssrt: unstable or n,m < 1");
  std::vector<int> L;
  for (int i = 1; i <= n; ++i) L.push_back(i);
  std::vector<StarTree> out;
  for (const auto& part : set_partitions(L)) {
    const int s = static_cast<int>(part.size());
    for (const auto& gs : compositions(g, s + 1)) {
      StarTree t;
      t.root_genus = gs[0];
      t.frozen = m;
      for (int j = 0; j < s; ++j) t.satellites.push_back({gs[j + 1], part[j]});
      out.push_back(std::move(t));
    }
  }
  return out;
}

Rational coeff_c1(const RootedTree& t) {
  Rational r = 1;
  for (int i = 0; i < t.size(); ++i) r *= Rational(t.chi(i), t.dchi(i));
  r.canonicalize();
  return r;
}

std::vector<std::vector<int>> rigorous_level_structures(const RootedTree& t) {
  const int nv = t.size();
  std::vector<std::vector<int>> out;
  std::vector<int> f(nv, 0);
  std::vector<char> placed(nv, 0);
  std::function<void(int)> rec = [&](int next) {
    if (next > nv) {
      out.push_back(f);
      return;
    }
    for (int v = 0; v < nv; ++v) {
      if (placed[v]) continue;
      int par = t.vertex(v).parent;
      if (par >= 0 && !placed[par]) continue;
      placed[v] = 1;
      f[v] = next;
      rec(next + 1);
      placed[v] = 0;
    }
  };
  rec(1);
  return out;
}

Rational coeff_c2(const RootedTree& t) {
  const int nv = t.size();
  Rational total = 0;
  for (const auto& f : rigorous_level_structures(t)) {
    std::vector<int> order(nv);
    for (int v = 0; v < nv; ++v) order[f[v] - 1] = v;
    Rational term = 1;
    for (int i = 0; i < nv; ++i) {
      int tail = 0;
      for (int j = i; j < nv; ++j) tail += t.chi(order[j]);
      term *= Rational(t.chi(order[i]), tail);
    }
    total += term;
  }
  total.canonicalize();
  return total;
}

}  // namespace tautrel
