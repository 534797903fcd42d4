// tautrel: compute pairings, run the vanishing checks, manage base tables and caches.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "tautrel/cache.hpp"
#include "tautrel/classes.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/kernels.hpp"
#include "tautrel/verifier.hpp"
#include "tautrel/wk.hpp"

using namespace tautrel;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kUncalibrated = 3, kInternal = 4, kInconsistent = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream in(s);
  std::string f;
  while (std::getline(in, f, ',')) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(f, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad integer list '" + s + "'");
    }
    if (pos != f.size()) throw UsageError("bad integer list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

// Settings shared by every subcommand.
struct Common {
  std::string constants;
  std::string cache;
  int threads = 0;
  bool verbose = false;

  std::unique_ptr<KernelTable> owned;
  std::unique_ptr<CacheStore> store;

  const KernelTable& table() {
    if (constants.empty()) return KernelTable::shipped();
    if (!owned) owned = KernelTable::from_constants(slurp(constants));
    return *owned;
  }
  std::string cache_path() const {
    if (!cache.empty()) return cache;
    const char* env = std::getenv("TAUTREL_CACHE");
    return env ? env : "";
  }
  CacheStore* open_cache() {
    const std::string p = cache_path();
    if (p.empty()) return nullptr;
    if (!store) store = std::make_unique<CacheStore>(p, engine_version(table()));
    return store.get();
  }
  int thread_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

struct RangeArgs {
  int max_g = 2, max_n = 4, max_m = 3, max_sum_b = -1, max_b = 4, max_vertices = 5;
  std::string report;
  void add(CLI::App* app, bool m_too) {
    app->add_option("--max-g", max_g, "largest genus")->capture_default_str();
    app->add_option("--max-n", max_n, "largest number of regular legs")->capture_default_str();
    if (m_too) app->add_option("--max-m", max_m, "largest number of frozen legs")->capture_default_str();
    app->add_option("--max-sum-b", max_sum_b, "cap on the total frozen psi degree (-1: dimension)")->capture_default_str();
    app->add_option("--report", report, "write the JSON report here");
  }
  InstanceRange range() const {
    if (max_g < 0 || max_n < 1 || max_m < 1 || max_sum_b < -1 || max_b < 1 || max_vertices < 1)
      throw UsageError("invalid range");
    InstanceRange r;
    r.max_g = max_g;
    r.max_n = max_n;
    r.max_m = max_m;
    r.max_sum_b = max_sum_b;
    r.max_string_b = max_b;
    r.max_vertices = max_vertices;
    return r;
  }
};

int run_verify(Common& common, const std::string& name, const SuiteSelection& sel, const RangeArgs& ra) {
  InstanceRange range = ra.range();
  SuiteConfig cfg;
  cfg.name = name;
  cfg.checks = sel;
  cfg.threads = common.thread_count();
  cfg.ctx.kt = &common.table();
  cfg.ctx.cache = common.open_cache();
  VerificationReport rep = run_suite(range, cfg);
  if (cfg.ctx.cache) store_memos(*cfg.ctx.cache, common.table());
  if (!ra.report.empty()) write_file(ra.report, rep.to_json());
  for (const auto& e : rep.entries)
    if (e.verdict == Verdict::Fail) std::cerr << "FAIL " << e.key() << ": " << e.poly_if_fail << "\n";
  if (common.verbose) {
    double ms = 0;
    for (const auto& e : rep.entries) ms += e.timing_ms;
    std::cerr << "instances " << rep.entries.size() << ", " << ms << " ms of check time\n";
  }
  std::cout << rep.summary_line() << "\n";
  return rep.all_pass() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact pairings of tree-sum tautological classes and checks of their degree bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--constants", common.constants, "base-constants file (default: the shipped table)");
    sub->add_option("--cache", common.cache, "cache file (default: $TAUTREL_CACHE, none if unset)");
    sub->add_option("--threads", common.threads, "worker threads (default: available parallelism)");
    sub->add_flag("--verbose", common.verbose, "diagnostics on stderr");
  };
  int result = kOk;

  // compute
  auto* compute = app.add_subcommand("compute", "print one object in canonical form");
  compute->require_subcommand(1);
  int g = 0, n = 1, m = 0, k = 1, d0 = 0;
  std::string dlist, blist, klass;
  bool json = false;
  auto* c_wk = compute->add_subcommand("wk", "psi intersection number <prod tau_d>_g");
  c_wk->add_option("--g", g)->required();
  c_wk->add_option("--d", dlist, "comma separated exponents")->required();
  auto* c_kernel = compute->add_subcommand("kernel", "lambda_g DR_g psi pairing as a polynomial in x1..xk");
  c_kernel->add_option("--g", g)->required();
  c_kernel->add_option("--k", k)->required();
  c_kernel->add_option("--d", dlist, "psi exponents at the k weighted points (default: zeros)");
  c_kernel->add_option("--d0", d0, "psi exponent at the balancing point")->required();
  auto* c_pair = compute->add_subcommand("pairing", "frozen-psi pairing against a tree-sum class");
  c_pair->add_option("--class", klass, "B, A, Xi or third")->required();
  c_pair->add_option("--g", g)->required();
  c_pair->add_option("--n", n)->required();
  c_pair->add_option("--m", m);
  c_pair->add_option("--b", blist, "comma separated frozen exponents");
  c_pair->add_flag("--json", json, "print the result as JSON");
  for (auto* s : {c_wk, c_kernel, c_pair}) add_common(s);

  // verify
  auto* verify = app.add_subcommand("verify", "run the vanishing checks; exit 1 on any FAIL");
  verify->require_subcommand(1);
  RangeArgs ra;
  int statement = 0;
  auto* v_master = verify->add_subcommand("master", "degree bound for the Xi pairings");
  ra.add(v_master, true);
  auto* v_aeqb = verify->add_subcommand("aeqb", "main theorem statements 1-3");
  ra.add(v_aeqb, true);
  v_aeqb->add_option("--statement", statement, "1, 2 or 3 (default: all)")->check(CLI::Range(1, 3));
  auto* v_string = verify->add_subcommand("string", "string identity for the sign-twisted Xi class");
  ra.add(v_string, false);
  v_string->add_option("--max-b", ra.max_b, "largest psi power")->capture_default_str();
  auto* v_c1c2 = verify->add_subcommand("c1c2", "the two tree coefficients agree");
  v_c1c2->add_option("--max-g", ra.max_g)->capture_default_str();
  v_c1c2->add_option("--max-n", ra.max_n)->capture_default_str();
  v_c1c2->add_option("--max-vertices", ra.max_vertices)->capture_default_str();
  v_c1c2->add_option("--report", ra.report);
  auto* v_suite = verify->add_subcommand("suite", "every check over one range");
  ra.add(v_suite, true);
  v_suite->add_option("--max-b", ra.max_b, "largest psi power for the string identity")->capture_default_str();
  v_suite->add_option("--max-vertices", ra.max_vertices)->capture_default_str();
  for (auto* s : {v_master, v_aeqb, v_string, v_c1c2, v_suite}) add_common(s);

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "build a base-constants file from oracle rows");
  std::string oracle, rows_file, output;
  int cal_g = 2, cal_k = 6;
  auto* o_oracle = calibrate->add_option("--oracle", oracle, "built-in oracle: hain")->check(CLI::IsMember({"hain"}));
  auto* o_rows = calibrate->add_option("--rows", rows_file, "file of K0 rows");
  o_oracle->excludes(o_rows);
  o_rows->excludes(o_oracle);
  calibrate->add_option("--max-g", cal_g)->capture_default_str();
  calibrate->add_option("--max-k", cal_k)->capture_default_str();
  calibrate->add_option("--output", output, "constants file to write (default: stdout)");
  calibrate->add_flag("--verbose", common.verbose);

  // cache
  auto* cache = app.add_subcommand("cache", "inspect and maintain a cache file");
  cache->require_subcommand(1);
  double fraction = 0.05;
  unsigned seed = 20240611;
  std::string from;
  auto* k_audit = cache->add_subcommand("audit", "recompute a random sample of entries");
  k_audit->add_option("--fraction", fraction)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  k_audit->add_option("--seed", seed)->capture_default_str();
  auto* k_merge = cache->add_subcommand("merge", "import the entries of another cache file");
  k_merge->add_option("--from", from)->required();
  auto* k_export = cache->add_subcommand("export", "print the visible entries in canonical order");
  k_export->add_option("--output", output);
  for (auto* s : {k_audit, k_merge, k_export}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (c_wk->parsed()) {
      std::cout << to_string(wk_integral(g, int_list(dlist))) << "\n";
    } else if (c_kernel->parsed()) {
      std::vector<int> d = dlist.empty() ? std::vector<int>(std::max(k, 0), 0) : int_list(dlist);
      if (k < 1 || static_cast<int>(d.size()) != k) throw UsageError("--d needs k entries");
      std::cout << common.table().kernel(g, k, d, d0).to_string() << "\n";
    } else if (c_pair->parsed()) {
      PairingRequest r;
      r.kind = parse_class_kind(klass);
      r.g = g;
      r.n = n;
      r.b = int_list(blist);
      r.m = c_pair->count("--m") ? m : static_cast<int>(r.b.size());
      validate(r);
      CheckContext ctx{&common.table(), common.open_cache()};
      PairingResult res;
      res.degree = expected_degree(r);
      res.poly = cached_pairing(r, ctx);
      if (r.kind == ClassKind::Xi) res.u_exp = 2 * r.g - 2 + r.m - res.degree;
      std::cout << (json ? to_json(res) : render(res)) << "\n";
    } else if (v_master->parsed()) {
      result = run_verify(common, "master", {true, false, false, false, false, false}, ra);
    } else if (v_aeqb->parsed()) {
      SuiteSelection s{false, statement == 0 || statement == 1, statement == 0 || statement == 2,
                       statement == 0 || statement == 3, false, false};
      result = run_verify(common, statement ? "aeqb" + std::to_string(statement) : "aeqb", s, ra);
    } else if (v_string->parsed()) {
      result = run_verify(common, "string", {false, false, false, false, true, false}, ra);
    } else if (v_c1c2->parsed()) {
      result = run_verify(common, "c1c2", {false, false, false, false, false, true}, ra);
    } else if (v_suite->parsed()) {
      result = run_verify(common, "suite", {}, ra);
    } else if (calibrate->parsed()) {
      if (oracle.empty() == rows_file.empty()) throw UsageError("give exactly one of --oracle or --rows");
      std::vector<CalibrationRow> rows = oracle.empty() ? parse_oracle_rows(slurp(rows_file)) : hain_rows(cal_g);
      const std::string source = oracle.empty() ? "rows:" + rows_file.substr(rows_file.find_last_of('/') + 1)
                                                : "hain-compact-type";
      CalibrationResult cal = calibrate_base_table(cal_g, cal_k, rows, source);
      bool unchanged = false;
      if (!output.empty()) {
        std::ifstream probe(output);
        if (probe) {
          std::ostringstream s;
          s << probe.rdbuf();
          unchanged = s.str() == cal.text;
        }
        if (!unchanged) write_file(output, cal.text);
        std::cout << "constants " << cal.constants << " rows " << cal.rows.size() << (unchanged ? " unchanged" : " written")
                  << "\n";
      } else {
        std::cout << cal.text;
      }
      if (common.verbose) std::cerr << "calibration excludes no instances: every row came from the oracle\n";
    } else if (k_audit->parsed() || k_merge->parsed() || k_export->parsed()) {
      CacheStore* store = common.open_cache();
      if (!store) throw UsageError("no cache: pass --cache or set TAUTREL_CACHE");
      for (const auto& bad : store->corrupt()) std::cerr << "corrupt entry ignored: " << bad << "\n";
      if (k_audit->parsed()) {
        // recompute with a fresh table so nothing comes from this store
        auto fresh = KernelTable::from_constants(common.constants.empty() ? std::string(KernelTable::shipped_constants_text())
                                                                          : slurp(common.constants));
        try {
          AuditReport rep = store->audit(fraction, *fresh, seed);
          std::cout << "audit PASS sampled " << rep.sampled << " of " << rep.total << "\n";
        } catch (const AuditFailure& e) {
          std::cerr << e.what() << "\n";
          std::cout << "audit FAIL\n";
          result = kFail;
        }
      } else if (k_merge->parsed()) {
        std::cout << "merged " << store->merge_from(from) << " entries\n";
      } else {
        if (output.empty())
          std::cout << store->export_text();
        else
          write_file(output, store->export_text());
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const UnstableTarget& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const UncalibratedBase& e) {
    std::cerr << "uncalibrated: " << e.what() << "\n";
    return kUncalibrated;
  } catch (const InconsistentCalibration& e) {
    std::cerr << "inconsistent calibration: " << e.what() << "\n";
    return kInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return result;
}
