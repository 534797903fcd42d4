#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tautrel/poly.hpp"

namespace tautrel {

// One shipped base polynomial K0(g,k) with its provenance.
struct BaseRecord {
  int g = 0;
  int k = 0;
  MultiPoly poly;
  std::string source;
  std::vector<std::string> checks;
};

struct KernelStats {
  long steps = 0;      // recursion steps taken
  long divisions = 0;  // exact divisions performed, each one asserted
};

// Memoized integrals of lambda_g DR_g(x1..xk, -sum x) prod psi_i^{d_i} psi_0^{d0},
// kept as polynomials in generic weights x1..xk.
class KernelTable {
 public:
  KernelTable();  // genus 0 only
  KernelTable(const KernelTable&) = delete;
  KernelTable& operator=(const KernelTable&) = delete;

  // Parses and re-verifies a constants file. Throws ParseError or
  // InconsistentCalibration.
  static std::unique_ptr<KernelTable> from_constants(std::string_view text);
  // Process-wide table built from the constants file compiled into the library.
  static const KernelTable& shipped();
  static std::string_view shipped_constants_text();

  int max_g() const { return max_g_; }
  int max_k() const { return max_k_; }
  const std::vector<BaseRecord>& records() const { return records_; }

  // K0(g,k): all regular exponents 0, d0 = g-2+k.
  MultiPoly base(int g, int k) const;
  MultiPoly kernel(int g, int k, const std::vector<int>& d, int d0) const;
  // One recursion step at point i (0-based, d[i] >= 1); sub-kernels come from
  // the memo. Used to cross-check the choice of reduction point.
  MultiPoly kernel_step(int g, int k, const std::vector<int>& d, int d0, int i) const;
  // Kernel with x_j replaced by weights[j].
  MultiPoly kernel_at(int g, int k, const std::vector<int>& d, int d0, const std::vector<MultiPoly>& weights) const;

  // Recompute every memo insertion with a second reduction point.
  void set_overdetermined(bool on) { overdetermined_ = on; }
  KernelStats stats() const { return {steps_.load(), divisions_.load()}; }

  using Key = std::tuple<int, int, std::vector<int>, int>;
  std::vector<std::pair<Key, MultiPoly>> memo_snapshot() const;
  std::size_t memo_size() const;

 private:
  MultiPoly compute_sorted(int g, int k, const std::vector<int>& d, int d0) const;
  MultiPoly sorted_kernel(int g, int k, const std::vector<int>& d, int d0) const;
  MultiPoly step(int g, int k, const std::vector<int>& d, int d0, int i) const;
  MultiPoly complete_by_string(int g, int k) const;

  int max_g_ = 0;
  int max_k_ = 64;
  std::vector<BaseRecord> records_;
  std::map<std::pair<int, int>, MultiPoly> base_;
  bool overdetermined_ = false;
  mutable std::shared_mutex mu_;
  mutable std::map<Key, MultiPoly> memo_;
  mutable std::atomic<long> steps_{0};
  mutable std::atomic<long> divisions_{0};
};

// Kernel-table helpers shared with calibration.
bool is_symmetric(const MultiPoly& p);
MultiPoly set_last_zero(const MultiPoly& p);  // x_k -> 0, result over vars_x(k-1)
MultiPoly permute_vars(const MultiPoly& p, const std::vector<int>& target, VarList vars);  // x_j -> x_{target[j]}
// Number of symmetric-orbit coefficients of degree deg divisible by x1..xk.
int free_constant_count(int deg, int k);

// Calibration: assembles a constants file from oracle rows.
struct CalibrationRow {
  int g = 0;
  int k = 0;
  MultiPoly poly;
};
struct CalibrationResult {
  std::string text;    // constants file contents
  int constants = 0;   // free constants fixed by the rows
  std::vector<std::pair<int, int>> rows;  // (g,k) written
};
std::vector<CalibrationRow> parse_oracle_rows(std::string_view text);
std::vector<CalibrationRow> hain_rows(int max_g);
// Throws InconsistentCalibration on contradictory or non-string-compatible rows.
CalibrationResult calibrate_base_table(int max_g, int max_k, const std::vector<CalibrationRow>& rows,
                                       const std::string& source);

}  // namespace tautrel
