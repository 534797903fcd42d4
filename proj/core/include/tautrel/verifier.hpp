#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tautrel/classes.hpp"
#include "tautrel/kernels.hpp"

namespace tautrel {

class CacheStore;

enum class Verdict { Pass, Fail };
std::string to_string(Verdict v);

struct ReportEntry {
  std::string check;  // master, aeqb1, aeqb2, aeqb3, string, c1c2
  int g = 0;
  int n = 0;
  int m = 0;
  std::vector<int> b;
  std::optional<int> bound;            // degree bound, none for equalities
  std::optional<int> computed_degree;  // none for the zero polynomial
  Verdict verdict = Verdict::Pass;
  std::string poly_if_fail;            // full offending polynomial or tree list
  double timing_ms = 0;

  // Identifies the instance, used for sorting and calibration exclusion.
  std::string key() const;  // check|g|n|m|b,..
};

// Pairings go through the cache when one is given.
struct CheckContext {
  const KernelTable* kt = &KernelTable::shipped();
  CacheStore* cache = nullptr;
};

MultiPoly cached_pairing(const PairingRequest& r, const CheckContext& ctx);

ReportEntry check_master(int g, int n, int m, const std::vector<int>& b, const CheckContext& ctx = {});
ReportEntry check_aeqb_1(int g, int n, int m, const std::vector<int>& b, const CheckContext& ctx = {});
ReportEntry check_aeqb_2(int g, int n, int b, const CheckContext& ctx = {});
ReportEntry check_aeqb_3(int g, int n, const CheckContext& ctx = {});
// The literal string identity for the sign-twisted class:
//   <psi^b psi^0, X2> = <psi^{b-1}, X1> + (a1+..+an) <psi^b, X1>.
ReportEntry check_string_xi(int g, int n, int b, const CheckContext& ctx = {});
// The same identity with the unstable-root trees of X1 taken out of both
// pairings on the right; see unstable_root_part.
ReportEntry check_string_xi_stable(int g, int n, int b, const CheckContext& ctx = {});
// Contribution to <psi^e, Xi^1_{g,n}> of the star trees whose root is the
// unstable genus-0 vertex carrying the frozen leg and one satellite.
MultiPoly unstable_root_part(int g, int n, int e, const KernelTable& kt = KernelTable::shipped());
ReportEntry check_c1_equals_c2(int max_vertices, int g, int n);

struct InstanceRange {
  int max_g = 2;
  int max_n = 4;
  int max_m = 3;
  int max_sum_b = -1;   // -1: up to the dimension
  int max_string_b = 4;
  int max_vertices = 5;
  std::set<std::string> calibration_exclusion;  // instance keys
};

struct SuiteSelection {
  bool master = true;
  bool aeqb1 = true;
  bool aeqb2 = true;
  bool aeqb3 = true;
  bool string = true;
  bool c1c2 = true;
};

struct SuiteConfig {
  std::string name = "suite";
  SuiteSelection checks;
  int threads = 1;
  CheckContext ctx;
};

struct VerificationReport {
  std::string suite;
  std::vector<ReportEntry> entries;  // sorted by instance
  std::string calibration_source;
  int calibration_max_g = 0;
  int calibration_max_k = 0;
  int calibration_constants = 0;
  std::vector<std::string> excluded;  // exclusion keys, sorted
  int equivalence_checked = 0;
  int equivalence_mismatches = 0;

  int passed() const;
  int failed() const;
  bool all_pass() const { return failed() == 0 && equivalence_mismatches == 0; }
  std::string summary_line() const;  // "PASS 100% (n/n)" or "FAIL ..."
  std::string to_json(bool with_timings = true) const;
};

// Instances the range would run, in report order; no evaluation.
std::vector<ReportEntry> plan_suite(const InstanceRange& range, const SuiteSelection& sel);

// Throws UncalibratedBase listing every instance outside the kernel table.
VerificationReport run_suite(const InstanceRange& range, const SuiteConfig& config);

}  // namespace tautrel
