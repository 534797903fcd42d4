#pragma once

#include <utility>
#include <vector>

#include "tautrel/rational.hpp"

namespace tautrel {

// Integral of prod psi_i^{d_i} over M_{g,k}. Zero on dimension mismatch,
// UnstableTarget when 2g-2+k <= 0. Memoized, thread safe.
Rational wk_integral(int g, const std::vector<int>& exponents);

// Same, but returns 0 instead of throwing on unstable targets. Internal
// assembly code hits those when probing degenerate vertices.
Rational wk_or_zero(int g, const std::vector<int>& exponents);

// Everything memoized so far, exponents sorted decreasingly. Feeds the
// persistent cache.
std::vector<std::pair<std::pair<int, std::vector<int>>, Rational>> wk_memo_snapshot();

// Genus-0 closed form (k-3)!/prod d_i!, used as an independent check.
Rational wk_genus0_closed(const std::vector<int>& exponents);

}  // namespace tautrel
