#pragma once

#include <vector>

namespace tautrel {

// All set partitions of `items`; blocks keep the input order and are
// listed by their first element.
std::vector<std::vector<std::vector<int>>> set_partitions(const std::vector<int>& items);

// Weak compositions of `total` into `parts` nonnegative summands, lex order.
std::vector<std::vector<int>> compositions(int total, int parts);

// Subsets of `items` as index masks, in increasing mask order.
std::vector<std::vector<int>> subsets(const std::vector<int>& items);

}  // namespace tautrel
