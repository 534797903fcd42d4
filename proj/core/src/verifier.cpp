#include "tautrel/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "tautrel/cache.hpp"
#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/trees.hpp"
#include "text_fields.hpp"

namespace tautrel {

namespace {

std::optional<int> degree_of(const MultiPoly& p) {
  if (p.is_zero()) return std::nullopt;
  return p.degree();
}

ReportEntry bounded(std::string check, int g, int n, int m, std::vector<int> b, int bound, const MultiPoly& p) {
  ReportEntry e{std::move(check), g, n, m, std::move(b), bound, degree_of(p)};
  const bool ok = p.is_zero() || p.degree() <= bound;
  e.verdict = ok ? Verdict::Pass : Verdict::Fail;
  if (!ok) e.poly_if_fail = p.to_string();
  return e;
}

ReportEntry equality(std::string check, int g, int n, int m, std::vector<int> b, const MultiPoly& diff) {
  ReportEntry e{std::move(check), g, n, m, std::move(b), std::nullopt, degree_of(diff)};
  e.verdict = diff.is_zero() ? Verdict::Pass : Verdict::Fail;
  if (!diff.is_zero()) e.poly_if_fail = diff.to_string();
  return e;
}

MultiPoly leg_sum(int n) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return MultiPoly::var_sum(vars_a(n), all);
}

MultiPoly xi(int g, int n, std::vector<int> b, const CheckContext& ctx) {
  const int m = static_cast<int>(b.size());
  return cached_pairing({ClassKind::Xi, g, n, m, std::move(b)}, ctx);
}

int check_rank(const std::string& c) {
  static const std::vector<std::string> order{"master", "aeqb1", "aeqb2", "aeqb3", "string", "string-stable", "c1c2"};
  auto it = std::find(order.begin(), order.end(), c);
  return static_cast<int>(it - order.begin());
}

bool entry_less(const ReportEntry& x, const ReportEntry& y) {
  return std::make_tuple(check_rank(x.check), x.check, x.g, x.n, x.m, x.b) <
         std::make_tuple(check_rank(y.check), y.check, y.g, y.n, y.m, y.b);
}

ReportEntry run_entry(const ReportEntry& plan, const CheckContext& ctx, int max_vertices) {
  const auto& c = plan.check;
  if (c == "master") return check_master(plan.g, plan.n, plan.m, plan.b, ctx);
  if (c == "aeqb1") return check_aeqb_1(plan.g, plan.n, plan.m, plan.b, ctx);
  if (c == "aeqb2") return check_aeqb_2(plan.g, plan.n, plan.b[0], ctx);
  if (c == "aeqb3") return check_aeqb_3(plan.g, plan.n, ctx);
  if (c == "string") return check_string_xi(plan.g, plan.n, plan.b[0], ctx);
  if (c == "c1c2") return check_c1_equals_c2(max_vertices, plan.g, plan.n);
  throw std::invalid_argument("unknown check " + c);
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::Pass ? "PASS" : "FAIL"; }

std::string ReportEntry::key() const {
  return check + "|" + std::to_string(g) + "|" + std::to_string(n) + "|" + std::to_string(m) + "|" + detail::join_ints(b);
}

MultiPoly cached_pairing(const PairingRequest& r, const CheckContext& ctx) {
  if (expected_degree(r) < 0) return MultiPoly(vars_a(r.n));
  const std::string key = cache_key(r);
  if (ctx.cache)
    if (auto hit = ctx.cache->get(key)) return MultiPoly::parse(*hit, vars_a(r.n));
  MultiPoly p = evaluate(r, *ctx.kt).poly;
  if (ctx.cache) ctx.cache->put(key, p.to_string());
  return p;
}

ReportEntry check_master(int g, int n, int m, const std::vector<int>& b, const CheckContext& ctx) {
  if (m < 1 || n < 1 || 2 * g - 2 + n + m <= 0) throw std::invalid_argument("master: need m >= 1 and a stable target");
  return bounded("master", g, n, m, b, 2 * g - 2 + m, xi(g, n, b, ctx));
}

ReportEntry check_aeqb_1(int g, int n, int m, const std::vector<int>& b, const CheckContext& ctx) {
  if (m < 2 || n < 1) throw std::invalid_argument("statement 1: need n >= 1, m >= 2");
  return bounded("aeqb1", g, n, m, b, 2 * g - 2 + m, cached_pairing({ClassKind::B, g, n, m, b}, ctx));
}

ReportEntry check_aeqb_2(int g, int n, int b, const CheckContext& ctx) {
  if (n < 1 || 2 * g - 1 + n <= 0 || b < 0) throw std::invalid_argument("statement 2: need n >= 1, 2g-1+n > 0, b >= 0");
  MultiPoly d = cached_pairing({ClassKind::B, g, n, 1, {b}}, ctx) - cached_pairing({ClassKind::A, g, n, 1, {b}}, ctx);
  return bounded("aeqb2", g, n, 1, {b}, 2 * g - 1, d);
}

ReportEntry check_aeqb_3(int g, int n, const CheckContext& ctx) {
  if (n < 1 || 2 * g - 2 + n <= 0) throw std::invalid_argument("statement 3: need n >= 1, 2g-2+n > 0");
  return bounded("aeqb3", g, n, 0, {}, 2 * g - 2, cached_pairing({ClassKind::Third, g, n, 0, {}}, ctx));
}

MultiPoly unstable_root_part(int g, int n, int e, const KernelTable& kt) {
  VarList A = vars_a(n);
  const int d0 = g - 2 + n;
  if ((g == 0 && n == 1) || d0 - e < 0) return MultiPoly(A);
  std::vector<MultiPoly> forms;
  for (int j = 0; j < n; ++j) forms.push_back(MultiPoly::variable(A, j));
  MultiPoly k = substitute_linear(kt.kernel(g, n, std::vector<int>(n, 0), d0), forms, A);
  return -(pow(leg_sum(n), d0 - e) * k);
}

namespace {

// diff of the two sides in the untwisted normalization; the twist multiplies
// everything by the same sign
MultiPoly string_diff(int g, int n, int b, const CheckContext& ctx, bool stable) {
  if (n < 1 || 2 * g - 1 + n <= 0) throw std::invalid_argument("string identity: need n >= 1, 2g-1+n > 0");
  if (b < 1) throw std::invalid_argument("string identity: needs b >= 1");
  MultiPoly lhs = xi(g, n, {b, 0}, ctx);
  MultiPoly r1 = xi(g, n, {b - 1}, ctx);
  MultiPoly r2 = xi(g, n, {b}, ctx);
  if (stable) {
    r1 = r1 - unstable_root_part(g, n, b - 1, *ctx.kt);
    r2 = r2 - unstable_root_part(g, n, b, *ctx.kt);
  }
  // the twisted right side has the second pairing one degree lower, so its
  // sign flips relative to the others
  MultiPoly d = lhs - r1 + leg_sum(n) * r2;
  const int deg = 3 * g - 1 + n - b;
  return deg % 2 ? -d : d;
}

}  // namespace

ReportEntry check_string_xi(int g, int n, int b, const CheckContext& ctx) {
  return equality("string", g, n, 1, {b}, string_diff(g, n, b, ctx, false));
}

ReportEntry check_string_xi_stable(int g, int n, int b, const CheckContext& ctx) {
  return equality("string-stable", g, n, 1, {b}, string_diff(g, n, b, ctx, true));
}

ReportEntry check_c1_equals_c2(int max_vertices, int g, int n) {
  ReportEntry e{"c1c2", g, n, 1, {}, std::nullopt, std::nullopt};
  if (n < 1 || 2 * g - 1 + n <= 0) return e;
  std::string bad;
  for (const auto& t : enumerate_srt(g, n, 1)) {
    if (t.size() > max_vertices) continue;
    if (coeff_c1(t) != coeff_c2(t)) bad += (bad.empty() ? "" : "; ") + t.encode();
  }
  if (!bad.empty()) {
    e.verdict = Verdict::Fail;
    e.poly_if_fail = bad;
  }
  return e;
}

int VerificationReport::passed() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.verdict == Verdict::Pass; }));
}

int VerificationReport::failed() const { return static_cast<int>(entries.size()) - passed(); }

std::string VerificationReport::summary_line() const {
  const int total = static_cast<int>(entries.size());
  const int pct = total ? static_cast<int>(100LL * passed() / total) : 100;
  std::string s = std::string(all_pass() ? "PASS" : "FAIL") + " " + std::to_string(pct) + "% (" + std::to_string(passed()) +
                  "/" + std::to_string(total) + " instances)";
  if (equivalence_mismatches) s += ", " + std::to_string(equivalence_mismatches) + " equivalence mismatches";
  return s;
}

std::string VerificationReport::to_json(bool with_timings) const {
  using J = nlohmann::ordered_json;
  J j;
  j["suite"] = suite;
  J inst = J::array();
  for (const auto& e : entries) {
    J x;
    x["check"] = e.check;
    x["g"] = e.g;
    x["n"] = e.n;
    x["m"] = e.m;
    x["b"] = e.b;
    x["bound"] = e.bound ? J(*e.bound) : J(nullptr);
    x["computed_degree"] = e.computed_degree ? J(*e.computed_degree) : J(nullptr);
    x["verdict"] = tautrel::to_string(e.verdict);
    x["poly_if_fail"] = e.verdict == Verdict::Fail ? J(e.poly_if_fail) : J(nullptr);
    if (with_timings) x["timing_ms"] = e.timing_ms;
    inst.push_back(std::move(x));
  }
  j["instances"] = std::move(inst);
  j["calibration"] = {{"source", calibration_source},
                      {"max_g", calibration_max_g},
                      {"max_k", calibration_max_k},
                      {"constants", calibration_constants},
                      {"excluded", excluded}};
  j["summary"] = {{"total", entries.size()},
                  {"pass", passed()},
                  {"fail", failed()},
                  {"equivalence_checked", equivalence_checked},
                  {"equivalence_mismatches", equivalence_mismatches},
                  {"status", summary_line()}};
  return j.dump(2) + "\n";
}

std::vector<ReportEntry> plan_suite(const InstanceRange& r, const SuiteSelection& sel) {
  std::vector<ReportEntry> out;
  auto add = [&](const char* check, int g, int n, int m, std::vector<int> b) {
    ReportEntry e;
    e.check = check;
    e.g = g;
    e.n = n;
    e.m = m;
    e.b = std::move(b);
    out.push_back(std::move(e));
  };
  auto cap = [&](int dim) { return r.max_sum_b < 0 ? dim : std::min(dim, r.max_sum_b); };
  for (int g = 0; g <= r.max_g; ++g)
    for (int n = 1; n <= r.max_n; ++n) {
      for (int m = 1; m <= r.max_m; ++m) {
        if (2 * g - 2 + n + m <= 0) continue;
        const int dim = 3 * g - 3 + n + m;
        for (int s = 0; s <= cap(dim); ++s)
          for (const auto& b : compositions(s, m)) {
            if (sel.master) add("master", g, n, m, b);
            if (sel.aeqb1 && m >= 2) add("aeqb1", g, n, m, b);
          }
      }
      if (2 * g - 1 + n > 0) {
        if (sel.aeqb2)
          for (int b = 0; b <= cap(3 * g - 2 + n); ++b) add("aeqb2", g, n, 1, {b});
        if (sel.string)
          for (int b = 1; b <= r.max_string_b; ++b) add("string", g, n, 1, {b});
        if (sel.c1c2) add("c1c2", g, n, 1, {});
      }
      if (sel.aeqb3 && 2 * g - 2 + n > 0) add("aeqb3", g, n, 0, {});
    }
  std::sort(out.begin(), out.end(), entry_less);
  return out;
}

VerificationReport run_suite(const InstanceRange& range, const SuiteConfig& config) {
  const KernelTable& kt = *config.ctx.kt;
  VerificationReport rep;
  rep.suite = config.name;
  rep.calibration_max_g = kt.max_g();
  rep.calibration_max_k = kt.max_k();
  std::set<std::string> sources;
  for (const auto& r : kt.records()) {
    sources.insert(r.source);
    rep.calibration_constants += free_constant_count(2 * r.g, r.k);
  }
  for (const auto& s : sources) rep.calibration_source += (rep.calibration_source.empty() ? "" : ",") + s;
  rep.excluded.assign(range.calibration_exclusion.begin(), range.calibration_exclusion.end());

  std::vector<ReportEntry> plan;
  for (auto& e : plan_suite(range, config.checks))
    if (!range.calibration_exclusion.count(e.key())) plan.push_back(std::move(e));
  for (const auto& e : plan)
    if (range.calibration_exclusion.count(e.key())) throw Error("calibration instance in acceptance set: " + e.key());

  std::vector<ReportEntry> done(plan.size());
  std::vector<std::string> uncalibrated(plan.size());
  std::atomic<size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < plan.size();) {
      try {
        auto t0 = std::chrono::steady_clock::now();
        done[i] = run_entry(plan[i], config.ctx, range.max_vertices);
        done[i].timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      } catch (const UncalibratedBase& e) {
        uncalibrated[i] = plan[i].key() + ": " + e.what();
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next = plan.size();
      }
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  std::string listing;
  for (const auto& u : uncalibrated)
    if (!u.empty()) listing += "\n  " + u;
  if (!listing.empty()) throw UncalibratedBase("range exceeds the calibrated base table:" + listing);

  rep.entries = std::move(done);
  std::sort(rep.entries.begin(), rep.entries.end(), entry_less);

  // master bound vs the matching A=B bound on the same instance
  std::map<std::tuple<int, int, int, std::vector<int>>, Verdict> master;
  for (const auto& e : rep.entries)
    if (e.check == "master") master[{e.g, e.n, e.m, e.b}] = e.verdict;
  for (const auto& e : rep.entries) {
    if (e.check != "aeqb1" && e.check != "aeqb2") continue;
    auto it = master.find({e.g, e.n, e.m, e.b});
    if (it == master.end()) continue;
    ++rep.equivalence_checked;
    if (it->second != e.verdict) ++rep.equivalence_mismatches;
  }
  return rep;
}

}  // namespace tautrel
