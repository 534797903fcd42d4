#pragma once

#include <string>
#include <vector>

#include "tautrel/poly.hpp"
#include "tautrel/rational.hpp"

namespace tautrel {

struct TreeVertex {
  int genus = 0;
  int parent = -1;            // -1 at the root
  std::vector<int> legs;      // regular legs, 1-based labels
  std::vector<int> children;  // vertex indices
};

// Stable rooted tree: vertex 0 is the root, vertices are in preorder and
// children are ordered by their smallest descendant leg. All m frozen
// legs sit on the root.
class RootedTree {
 public:
  RootedTree() = default;
  RootedTree(std::vector<TreeVertex> vertices, int frozen, int regular);

  int frozen() const { return m_; }
  int regular() const { return n_; }
  int size() const { return static_cast<int>(v_.size()); }
  const TreeVertex& vertex(int i) const { return v_[i]; }
  const std::vector<TreeVertex>& vertices() const { return v_; }
  int edges() const { return size() - 1; }
  int total_genus() const;

  // |H(v)|, |H_+(v)|.
  int half_edges(int i) const;
  int positive_half_edges(int i) const;
  int chi(int i) const { return 2 * v_[i].genus - 2 + half_edges(i); }
  int dchi(int i) const;
  int dim(int i) const { return 3 * v_[i].genus - 3 + half_edges(i); }

  std::vector<int> descendant_legs(int i) const;      // DL(v), sorted
  std::vector<int> descendant_vertices(int i) const;  // DV(v), includes v

  // a(v); for a non-root vertex this is also a(e) of the edge above it.
  MultiPoly vertex_weight(int i, const VarList& vars) const;
  // Positive half-edge weights at v: legs first, then child edges.
  std::vector<MultiPoly> positive_weights(int i, const VarList& vars) const;

  std::string encode() const;
  bool is_stable() const;

 private:
  std::vector<TreeVertex> v_;
  int m_ = 0;
  int n_ = 0;
};

using DegreeLabeling = std::vector<int>;
using LevelFunction = std::vector<int>;

// Legs 1..n, genus g, m frozen legs, no edge with empty DL(e).
std::vector<RootedTree> enumerate_srt(int g, int n, int m);

// Prefix inequality of the level function; stand-alone so tests can
// re-validate generator output.
bool is_admissible_level(const RootedTree& t, const DegreeLabeling& p, const LevelFunction& l);
std::vector<LevelFunction> admissible_levels(const RootedTree& t, const DegreeLabeling& p);
// Sum of (-1)^{max l} over admissible level functions.
int level_sign_sum(const RootedTree& t, const DegreeLabeling& p);

struct LeveledTree {
  RootedTree tree;
  DegreeLabeling p;
  LevelFunction level;
};
std::vector<LeveledTree> enumerate_ldlsrt(int g, int n, int m);

struct Satellite {
  int genus = 0;
  std::vector<int> legs;  // 1-based
  bool unstable() const { return genus == 0 && legs.size() == 1; }
};

struct StarTree {
  int root_genus = 0;
  int frozen = 0;
  std::vector<Satellite> satellites;
  bool unstable_root() const { return root_genus == 0 && frozen == 1 && satellites.size() == 1; }
  std::string encode() const;
};

std::vector<StarTree> enumerate_pssrt(int g, int n, int m);

Rational coeff_c1(const RootedTree& t);
Rational coeff_c2(const RootedTree& t);
// Bijections f with f(child) > f(parent), 1-based values.
std::vector<std::vector<int>> rigorous_level_structures(const RootedTree& t);

}  // namespace tautrel
