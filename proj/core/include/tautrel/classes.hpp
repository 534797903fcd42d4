#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tautrel/kernels.hpp"
#include "tautrel/poly.hpp"

namespace tautrel {

enum class ClassKind { B, A, Xi, Third };
std::string to_string(ClassKind k);
ClassKind parse_class_kind(std::string_view s);

enum class TreeCoefficient { C1, C2 };

// What a Xi class with no regular legs means.
enum class EmptyLegs {
  Zero,         // Xi^m_{g,0} := 0
  Fundamental,  // the single-vertex tree, i.e. the fundamental class
};

// All results are polynomials over vars_a(n). b holds the psi exponents at
// the frozen legs n+1..n+m.
MultiPoly pair_B(int g, int n, int m, const std::vector<int>& b);
MultiPoly pair_A(int g, int n, int b, const KernelTable& kt = KernelTable::shipped(),
                 TreeCoefficient coeff = TreeCoefficient::C1);
// c: optional psi exponents at the regular legs (empty means all zero).
MultiPoly pair_Xi(int g, int n, int m, const std::vector<int>& b, const KernelTable& kt = KernelTable::shipped(),
                  const std::vector<int>& c = {}, EmptyLegs empty = EmptyLegs::Fundamental);
// B^0 pairing minus the A pairing at b = 0 divided by a1+...+an.
MultiPoly pair_third(int g, int n, const KernelTable& kt = KernelTable::shipped());

// Expansion of [prod_h (1 - w_h psi_h)^{-1}]_deg against extra psi powers at
// the same half-edges and `fixed` powers at the remaining points of M_{g,.}.
MultiPoly psi_expand(int g, const std::vector<MultiPoly>& weights, const std::vector<int>& extra, int deg,
                     const std::vector<int>& fixed, const VarList& vars);

struct PairingRequest {
  ClassKind kind = ClassKind::B;
  int g = 0;
  int n = 1;
  int m = 0;
  std::vector<int> b;
};

struct PairingResult {
  int degree = 0;              // expected homogeneous degree
  std::optional<int> u_exp;    // Xi only
  MultiPoly poly;
};

// Dimension-derived degree of the result; also validates the request.
int expected_degree(const PairingRequest& r);
void validate(const PairingRequest& r);
PairingResult evaluate(const PairingRequest& r, const KernelTable& kt = KernelTable::shipped());

std::string cache_key(const PairingRequest& r);  // P|class|g|n|m|b,..
std::string render(const PairingResult& r);      // canonical text, "(u^k)" suffix for Xi
std::string to_json(const PairingRequest& r);
std::string to_json(const PairingResult& r);
PairingRequest request_from_json(std::string_view text);

}  // namespace tautrel
