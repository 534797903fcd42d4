#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/trees.hpp"

using namespace tautrel;

namespace {

// Canonical string of a tree given by parent links, genera and leg owners.
std::string canon(const std::vector<int>& parent, const std::vector<int>& genus, const std::vector<int>& owner) {
  const int V = static_cast<int>(parent.size());
  std::function<std::string(int)> rec = [&](int v) {
    std::string s = "(" + std::to_string(genus[v]) + ":";
    for (size_t l = 0; l < owner.size(); ++l)
      if (owner[l] == v) s += std::to_string(l + 1) + ",";
    std::vector<std::string> kids;
    for (int c = 0; c < V; ++c)
      if (parent[c] == v) kids.push_back(rec(c));
    std::sort(kids.begin(), kids.end());
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return rec(0);
}

std::string canon(const RootedTree& t) {
  std::vector<int> parent, genus, owner(t.regular(), -1);
  for (int v = 0; v < t.size(); ++v) {
    parent.push_back(t.vertex(v).parent);
    genus.push_back(t.vertex(v).genus);
    for (int l : t.vertex(v).legs) owner[l - 1] = v;
  }
  return canon(parent, genus, owner);
}

// Every labeled tree up to max_v vertices, filtered by the invariants.
std::set<std::string> brute_srt(int g, int n, int m, int max_v) {
  std::set<std::string> out;
  for (int V = 1; V <= max_v; ++V) {
    std::vector<int> parent(V, -1);
    std::function<void(int)> parents = [&](int i) {
      if (i == V) {
        for (const auto& genus : compositions(g, V)) {
          std::vector<int> owner(n, 0);
          std::function<void(int)> legs = [&](int l) {
            if (l == n) {
              std::vector<int> he(V, 0), dl(V, 0);
              he[0] = m;
              for (int v = 1; v < V; ++v) {
                ++he[v];
                ++he[parent[v]];
              }
              for (int o : owner) ++he[o];
              for (int v = 0; v < V; ++v)
                if (2 * genus[v] - 2 + he[v] <= 0) return;
              for (int o : owner)
                for (int v = o; v >= 0; v = parent[v]) ++dl[v];
              for (int v = 1; v < V; ++v)
                if (dl[v] == 0) return;
              out.insert(canon(parent, genus, owner));
              return;
            }
            for (int v = 0; v < V; ++v) {
              owner[l] = v;
              legs(l + 1);
            }
          };
          legs(0);
        }
        return;
      }
      for (int p = 0; p < i; ++p) {
        parent[i] = p;
        parents(i + 1);
      }
    };
    parents(1);
  }
  return out;
}

// Restricted growth strings give the set partitions without the library helper.
int brute_pssrt(int g, int n) {
  int count = 0;
  std::vector<int> f(n, 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      count += static_cast<int>(compositions(g, blocks + 1).size());
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      f[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return count;
}

RootedTree chain_tree() {
  // root: frozen leg, leg 1, child; child: legs 2, 3
  std::vector<TreeVertex> v(2);
  v[0] = {0, -1, {1}, {1}};
  v[1] = {0, 0, {2, 3}, {}};
  return RootedTree(v, 1, 3);
}

RootedTree cherry_tree() {
  std::vector<TreeVertex> v(3);
  v[0] = {0, -1, {}, {1, 2}};
  v[1] = {0, 0, {1, 2}, {}};
  v[2] = {0, 0, {3, 4}, {}};
  return RootedTree(v, 1, 4);
}

}  // namespace

TEST(SRT, SpecCounts) {
  EXPECT_EQ(enumerate_srt(0, 1, 2).size(), 1u);
  EXPECT_EQ(enumerate_srt(0, 2, 2).size(), 2u);
  EXPECT_EQ(enumerate_srt(1, 1, 2).size(), 2u);
  EXPECT_THROW(enumerate_srt(0, 1, 0), UnstableTarget);
}

TEST(SRT, MatchesBruteForce) {
  for (int g = 0; g <= 1; ++g)
    for (int n = 1; n <= 3; ++n)
      for (int m = 0; m <= 2; ++m) {
        if (2 * g - 2 + n + m <= 0) continue;
        std::set<std::string> mine;
        for (const auto& t : enumerate_srt(g, n, m)) EXPECT_TRUE(mine.insert(canon(t)).second) << "duplicate";
        EXPECT_EQ(mine, brute_srt(g, n, m, n + g + 1)) << g << n << m;
      }
}

TEST(SRT, InvariantsAndDeterminism) {
  for (int g = 0; g <= 2; ++g)
    for (int n = 1; n <= 4; ++n) {
      if (2 * g - 1 + n <= 0) continue;
      auto a = enumerate_srt(g, n, 1);
      for (const auto& t : a) {
        EXPECT_TRUE(t.is_stable());
        EXPECT_EQ(t.total_genus(), g);
        EXPECT_EQ(t.descendant_legs(0).size(), static_cast<size_t>(n));
        for (int v = 1; v < t.size(); ++v) EXPECT_FALSE(t.descendant_legs(v).empty());
      }
      std::vector<std::string> e1, e2;
      for (const auto& t : a) e1.push_back(t.encode());
      for (const auto& t : enumerate_srt(g, n, 1)) e2.push_back(t.encode());
      EXPECT_EQ(e1, e2);
    }
}

TEST(SRT, Weights) {
  RootedTree t = chain_tree();
  VarList A = vars_a(3);
  EXPECT_EQ(t.vertex_weight(1, A), MultiPoly::parse("a2 + a3", A));
  EXPECT_EQ(t.vertex_weight(0, A), MultiPoly::parse("a1 + a2 + a3", A));
  auto w = t.positive_weights(0, A);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0], MultiPoly::parse("a1", A));
}

TEST(LDLSRT, SpecCounts) {
  EXPECT_EQ(enumerate_ldlsrt(0, 1, 2).size(), 1u);
  EXPECT_EQ(enumerate_ldlsrt(0, 2, 2).size(), 3u);
  int multi = 0;
  for (const auto& x : enumerate_ldlsrt(0, 3, 1)) multi += x.tree.size() >= 2;
  EXPECT_EQ(multi, 0);
}

TEST(LDLSRT, PrefixInequalityRechecked) {
  for (int g = 0; g <= 1; ++g)
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m) {
        if (2 * g - 2 + n + m <= 0) continue;
        std::set<std::string> seen;
        for (const auto& x : enumerate_ldlsrt(g, n, m)) {
          const auto& t = x.tree;
          const int top = *std::max_element(x.level.begin(), x.level.end());
          EXPECT_EQ(x.level[0], 0);
          for (int v = 1; v < t.size(); ++v) EXPECT_GT(x.level[v], x.level[t.vertex(v).parent]);
          for (int i = 0; i <= top; ++i) EXPECT_NE(std::count(x.level.begin(), x.level.end(), i), 0);
          for (int v = 0; v < t.size(); ++v) EXPECT_LE(x.p[v], t.dim(v));
          for (int i = 0; i < top; ++i) {
            int cnt = 0, ps = 0, gs = 0;
            for (int v = 0; v < t.size(); ++v)
              if (x.level[v] <= i) {
                ++cnt;
                ps += x.p[v];
                gs += t.vertex(v).genus;
              }
            EXPECT_LE(cnt - 1 + ps, 2 * gs - 2 + m);
          }
          std::string key = t.encode() + "|";
          for (int v : x.p) key += std::to_string(v) + ",";
          key += "|";
          for (int v : x.level) key += std::to_string(v) + ",";
          EXPECT_TRUE(seen.insert(key).second);
          EXPECT_TRUE(is_admissible_level(t, x.p, x.level));
        }
      }
}

TEST(PSSRT, SpecCounts) {
  EXPECT_EQ(enumerate_pssrt(0, 1, 2).size(), 1u);
  EXPECT_EQ(enumerate_pssrt(0, 2, 1).size(), 2u);
  EXPECT_EQ(enumerate_pssrt(1, 1, 1).size(), 2u);
}

TEST(PSSRT, MatchesBruteForce) {
  for (int g = 0; g <= 2; ++g)
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; m <= 2; ++m) {
        if (2 * g - 2 + n + m <= 0) continue;
        auto st = enumerate_pssrt(g, n, m);
        EXPECT_EQ(static_cast<int>(st.size()), brute_pssrt(g, n)) << g << n << m;
        std::set<std::string> enc;
        for (const auto& s : st) {
          EXPECT_TRUE(enc.insert(s.encode()).second);
          std::vector<int> legs;
          int genus = s.root_genus;
          for (const auto& sat : s.satellites) {
            EXPECT_FALSE(sat.legs.empty());
            legs.insert(legs.end(), sat.legs.begin(), sat.legs.end());
            genus += sat.genus;
            EXPECT_EQ(sat.unstable(), sat.genus == 0 && sat.legs.size() == 1);
          }
          std::sort(legs.begin(), legs.end());
          std::vector<int> all(n);
          for (int i = 0; i < n; ++i) all[i] = i + 1;
          EXPECT_EQ(legs, all);
          EXPECT_EQ(genus, g);
          EXPECT_EQ(s.unstable_root(), s.root_genus == 0 && m == 1 && s.satellites.size() == 1);
        }
      }
}

TEST(Coefficients, SpecExamples) {
  auto single = enumerate_srt(0, 2, 1);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(coeff_c1(single[0]), 1);
  EXPECT_EQ(coeff_c2(single[0]), 1);

  RootedTree chain = chain_tree();
  EXPECT_EQ(chain.chi(0), 1);
  EXPECT_EQ(chain.chi(1), 1);
  EXPECT_EQ(coeff_c1(chain), make_rational(1, 2));
  EXPECT_EQ(coeff_c2(chain), make_rational(1, 2));
  EXPECT_EQ(rigorous_level_structures(chain).size(), 1u);

  RootedTree cherry = cherry_tree();
  EXPECT_EQ(coeff_c1(cherry), make_rational(1, 3));
  EXPECT_EQ(coeff_c2(cherry), make_rational(1, 3));
  EXPECT_EQ(rigorous_level_structures(cherry).size(), 2u);
}

TEST(Coefficients, C1EqualsC2Exhaustive) {
  int trees = 0;
  for (int g = 0; g <= 2; ++g)
    for (int n = 1; n <= 4; ++n) {
      if (2 * g - 1 + n <= 0) continue;
      for (const auto& t : enumerate_srt(g, n, 1)) {
        if (t.size() > 5) continue;
        EXPECT_EQ(coeff_c1(t), coeff_c2(t)) << t.encode();
        ++trees;
      }
    }
  EXPECT_GT(trees, 100);
}

TEST(Coefficients, RigorousStructuresAreOrderCompatible) {
  for (const auto& t : enumerate_srt(1, 3, 1)) {
    for (const auto& f : rigorous_level_structures(t)) {
      std::vector<int> sorted = f;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < t.size(); ++i) EXPECT_EQ(sorted[i], i + 1);
      for (int v = 1; v < t.size(); ++v) EXPECT_GT(f[v], f[t.vertex(v).parent]);
    }
  }
}
