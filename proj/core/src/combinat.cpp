#include "tautrel/combinat.hpp"

#include <functional>

namespace tautrel {

std::vector<std::vector<std::vector<int>>> set_partitions(const std::vector<int>& items) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> blocks;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == items.size()) {
      out.push_back(blocks);
      return;
    }
    // index loop: the recursion below grows `blocks`
    for (size_t j = 0; j < blocks.size(); ++j) {
      blocks[j].push_back(items[i]);
      rec(i + 1);
      blocks[j].pop_back();
    }
    blocks.push_back({items[i]});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
  return out;
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  if (parts == 0) {
    if (total == 0) out.push_back({});
    return out;
  }
  if (total < 0) return out;
  std::vector<int> cur(parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      cur[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, total);
  return out;
}

std::vector<std::vector<int>> subsets(const std::vector<int>& items) {
  std::vector<std::vector<int>> out;
  size_t n = items.size();
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<int> s;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(items[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tautrel
