#include "tautrel/kernels.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>

#include "tautrel/combinat.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/hain.hpp"
#include "text_fields.hpp"

namespace tautrel {

namespace {

std::string key_str(int g, int k) { return "(g=" + std::to_string(g) + ",k=" + std::to_string(k) + ")"; }

using detail::record_fields;
int to_int(const std::map<std::string, std::string>& f, const std::string& k) { return detail::field_int(f, k); }
std::map<std::string, std::string> fields(const std::string& line) { return record_fields(line); }

std::vector<std::string> split(const std::string& s, char c) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == c) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

MultiPoly permute_vars(const MultiPoly& p, const std::vector<int>& target, VarList vars) {
  MultiPoly out(std::move(vars));
  for (const auto& [m, c] : p.terms()) {
    Mono n;
    for (size_t j = 0; j < target.size(); ++j) n.e[target[j]] = m.e[j];
    out.add_term(n, c);
  }
  return out;
}

bool is_symmetric(const MultiPoly& p) {
  const int k = p.nvars();
  if (k < 2) return true;
  std::vector<int> swap(k), cyc(k);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  for (int j = 0; j < k; ++j) cyc[j] = (j + 1) % k;
  return permute_vars(p, swap, p.vars()) == p && permute_vars(p, cyc, p.vars()) == p;
}

MultiPoly set_last_zero(const MultiPoly& p) {
  const int k = p.nvars();
  MultiPoly out(vars_x(k - 1));
  for (const auto& [m, c] : p.terms())
    if (m.e[k - 1] == 0) out.add_term(m, c);
  return out;
}

int free_constant_count(int deg, int k) {
  // partitions of deg into exactly k positive parts
  std::function<int(int, int, int)> rec = [&](int left, int parts, int maxpart) -> int {
    if (parts == 0) return left == 0 ? 1 : 0;
    int s = 0;
    for (int x = std::min(left, maxpart); x >= 1; --x) s += rec(left - x, parts - 1, x);
    return s;
  };
  return rec(deg, k, deg);
}

KernelTable::KernelTable() : max_g_(0), max_k_(kMaxVars) {}

const KernelTable& KernelTable::shipped() {
  static std::unique_ptr<KernelTable> t = from_constants(shipped_constants_text());
  return *t;
}

std::unique_ptr<KernelTable> KernelTable::from_constants(std::string_view text) {
  auto t = std::make_unique<KernelTable>();
  t->max_g_ = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      if (line.rfind("RANGE", 0) == 0) {
        auto f = fields(line);
        t->max_g_ = to_int(f, "max_g");
        t->max_k_ = to_int(f, "max_k");
        if (t->max_k_ > kMaxVars || t->max_k_ < 1 || t->max_g_ < 0) throw ParseError("range out of bounds");
      } else if (line.rfind("K0", 0) == 0) {
        auto f = fields(line);
        BaseRecord r;
        r.g = to_int(f, "g");
        r.k = to_int(f, "k");
        if (r.g < 1 || r.k < 1 || r.k > kMaxVars) throw ParseError("bad (g,k)");
        if (!f.count("poly")) throw ParseError("missing poly");
        r.poly = MultiPoly::parse(f["poly"], vars_x(r.k));
        r.source = f.count("source") ? f["source"] : "";
        if (r.source.empty()) throw ParseError("missing source");
        r.checks = split(f.count("checks") ? f["checks"] : "", ',');
        t->records_.push_back(std::move(r));
      } else {
        throw ParseError("unknown record");
      }
    } catch (const ParseError& e) {
      throw ParseError("constants line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (t->max_g_ < 0) throw ParseError("constants: missing RANGE line");

  std::sort(t->records_.begin(), t->records_.end(),
            [](const BaseRecord& a, const BaseRecord& b) { return std::tie(a.g, a.k) < std::tie(b.g, b.k); });
  for (const auto& r : t->records_) {
    if (r.g > t->max_g_ || r.k > t->max_k_) throw InconsistentCalibration("record outside RANGE " + key_str(r.g, r.k));
    if (t->base_.count({r.g, r.k})) throw InconsistentCalibration("duplicate record " + key_str(r.g, r.k));
    for (const auto& c : r.checks) {
      bool ok = false;
      if (c == "symmetric") {
        ok = is_symmetric(r.poly);
      } else if (c == "homogeneous") {
        ok = r.poly.is_zero() || (r.poly.is_homogeneous() && r.poly.degree() == 2 * r.g);
      } else if (c == "string") {
        MultiPoly low = set_last_zero(r.poly);
        if (r.k == 1) {
          ok = low.is_zero();
        } else {
          auto it = t->base_.find({r.g, r.k - 1});
          ok = it != t->base_.end() && it->second == low;
        }
      } else if (c == "oracle") {
        ok = hain_kernel(r.g, r.k, std::vector<int>(r.k, 0), r.g - 2 + r.k) == r.poly;
      } else {
        throw ParseError("unknown check '" + c + "'");
      }
      if (!ok) throw InconsistentCalibration("check '" + c + "' failed for " + key_str(r.g, r.k));
    }
    t->base_.emplace(std::make_pair(r.g, r.k), r.poly);
  }
  for (int g = 1; g <= t->max_g_; ++g)
    for (int k = 2 * g + 1; k <= t->max_k_; ++k)
      if (!t->base_.count({g, k}) && t->base_.count({g, k - 1})) t->base_.emplace(std::make_pair(g, k), t->complete_by_string(g, k));
  return t;
}

MultiPoly KernelTable::complete_by_string(int g, int k) const {
  // Every degree-2g monomial in k > 2g variables misses some variable, so
  // symmetry plus x_k -> 0 pins down each coefficient.
  const MultiPoly& low = base_.at({g, k - 1});
  MultiPoly out(vars_x(k));
  for (const auto& comp : compositions(2 * g, k)) {
    std::vector<int> nz;
    for (int e : comp)
      if (e) nz.push_back(e);
    std::sort(nz.rbegin(), nz.rend());
    Mono probe, m;
    for (size_t j = 0; j < nz.size(); ++j) probe.e[j] = static_cast<std::uint8_t>(nz[j]);
    for (int j = 0; j < k; ++j) m.e[j] = static_cast<std::uint8_t>(comp[j]);
    Rational c = low.coeff(probe);
    if (c != 0) out.add_term(m, c);
  }
  if (!(set_last_zero(out) == low)) throw InconsistentCalibration("string completion failed at " + key_str(g, k));
  return out;
}

MultiPoly KernelTable::base(int g, int k) const {
  if (k < 1) throw UnstableTarget("kernel base needs k >= 1");
  if (g == 0) return k >= 2 ? MultiPoly::constant(vars_x(k), 1) : MultiPoly(vars_x(k));
  if (g > max_g_ || k > max_k_) throw UncalibratedBase("no calibrated base " + key_str(g, k));
  auto it = base_.find({g, k});
  if (it == base_.end()) throw UncalibratedBase("no calibrated base " + key_str(g, k));
  return it->second;
}

MultiPoly KernelTable::kernel(int g, int k, const std::vector<int>& d, int d0) const {
  if (k < 1 || static_cast<int>(d.size()) != k || g < 0) throw UnstableTarget("kernel: bad shape");
  if (k > kMaxVars) throw UncalibratedBase("kernel: too many points");
  VarList X = vars_x(k);
  if (2 * g - 1 + k <= 0) return MultiPoly(X);
  if (d0 < 0) return MultiPoly(X);
  int s = d0;
  for (int e : d) {
    if (e < 0) return MultiPoly(X);
    s += e;
  }
  if (s != g - 2 + k) return MultiPoly(X);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return d[a] > d[b]; });
  std::vector<int> sd(k);
  for (int j = 0; j < k; ++j) sd[j] = d[perm[j]];
  MultiPoly p = sorted_kernel(g, k, sd, d0);
  bool identity = true;
  for (int j = 0; j < k; ++j) identity = identity && perm[j] == j;
  return identity ? p : permute_vars(p, perm, X);
}

MultiPoly KernelTable::sorted_kernel(int g, int k, const std::vector<int>& d, int d0) const {
  Key key{g, k, d, d0};
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  MultiPoly v = compute_sorted(g, k, d, d0);
  std::unique_lock lock(mu_);
  auto [it, inserted] = memo_.emplace(key, v);
  if (!inserted && !(it->second == v)) throw Error("kernel memo: nondeterministic value");
  return it->second;
}

MultiPoly KernelTable::compute_sorted(int g, int k, const std::vector<int>& d, int d0) const {
  if (d[0] == 0) return base(g, k);
  MultiPoly v = step(g, k, d, d0, 0);
  if (overdetermined_) {
    int last = k - 1;
    while (d[last] == 0) --last;
    if (last != 0) {
      MultiPoly w = step(g, k, d, d0, last);
      if (!(w == v)) throw InconsistentCalibration("kernel depends on reduction point at g=" + std::to_string(g));
    }
  }
  return v;
}

MultiPoly KernelTable::kernel_step(int g, int k, const std::vector<int>& d, int d0, int i) const {
  if (i < 0 || i >= k || d[i] < 1) throw std::invalid_argument("kernel_step: point has no psi power");
  int s = d0;
  for (int e : d) s += e;
  if (s != g - 2 + k || d0 < 0) return MultiPoly(vars_x(k));
  return step(g, k, d, d0, i);
}

MultiPoly KernelTable::step(int g, int k, const std::vector<int>& d, int d0, int i) const {
  ++steps_;
  VarList X = vars_x(k);
  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> dm = d;
  --dm[i];
  MultiPoly br = -(MultiPoly::var_sum(X, all) * kernel(g, k, dm, d0 + 1));
  std::vector<int> others;
  for (int j = 0; j < k; ++j)
    if (j != i) others.push_back(j);
  for (const auto& J : subsets(others)) {
    std::vector<int> I{i}, Ic;
    I.insert(I.end(), J.begin(), J.end());
    std::sort(I.begin(), I.end());
    for (int j = 0; j < k; ++j)
      if (!std::binary_search(I.begin(), I.end(), j)) Ic.push_back(j);
    const int k1 = static_cast<int>(Ic.size()) + 1, k2 = static_cast<int>(I.size());
    MultiPoly xI = MultiPoly::var_sum(X, I);
    for (int g1 = 0; g1 <= g; ++g1) {
      const int g2 = g - g1;
      if (2 * g1 - 1 + k1 <= 0 || 2 * g2 - 1 + k2 <= 0) continue;
      std::vector<int> d1, d2;
      for (int j : Ic) d1.push_back(d[j]);
      d1.push_back(0);
      for (int j : I) d2.push_back(dm[j]);
      MultiPoly p1 = kernel(g1, k1, d1, d0);
      if (p1.is_zero()) continue;
      MultiPoly p2 = kernel(g2, k2, d2, 0);
      if (p2.is_zero()) continue;
      std::vector<MultiPoly> f1, f2;
      for (int j : Ic) f1.push_back(MultiPoly::variable(X, j));
      f1.push_back(xI);
      for (int j : I) f2.push_back(MultiPoly::variable(X, j));
      br += xI * substitute_linear(p1, f1, X) * substitute_linear(p2, f2, X);
    }
  }
  ++divisions_;
  return exact_div_var(br, i);
}

MultiPoly KernelTable::kernel_at(int g, int k, const std::vector<int>& d, int d0,
                                 const std::vector<MultiPoly>& weights) const {
  MultiPoly p = kernel(g, k, d, d0);
  if (weights.empty()) throw std::invalid_argument("kernel_at: no weights");
  VarList target = weights.front().vars();
  for (const auto& w : weights)
    if (!w.is_constant()) target = w.vars();
  return substitute_linear(p, weights, target);
}

std::vector<std::pair<KernelTable::Key, MultiPoly>> KernelTable::memo_snapshot() const {
  std::shared_lock lock(mu_);
  return {memo_.begin(), memo_.end()};
}

std::size_t KernelTable::memo_size() const {
  std::shared_lock lock(mu_);
  return memo_.size();
}

std::vector<CalibrationRow> parse_oracle_rows(std::string_view text) {
  std::vector<CalibrationRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("RANGE", 0) == 0) continue;
    if (line.rfind("K0", 0) != 0) throw ParseError("oracle line " + std::to_string(lineno) + ": unknown record");
    auto f = fields(line);
    CalibrationRow r;
    r.g = to_int(f, "g");
    r.k = to_int(f, "k");
    if (r.g < 0 || r.k < 1 || r.k > kMaxVars || !f.count("poly"))
      throw ParseError("oracle line " + std::to_string(lineno) + ": bad row");
    r.poly = MultiPoly::parse(f["poly"], vars_x(r.k));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CalibrationRow> hain_rows(int max_g) {
  std::vector<CalibrationRow> rows;
  for (int g = 1; g <= std::min(max_g, 2); ++g)
    for (int k = 1; k <= 2 * g; ++k) rows.push_back({g, k, hain_kernel(g, k, std::vector<int>(k, 0), g - 2 + k)});
  return rows;
}

CalibrationResult calibrate_base_table(int max_g, int max_k, const std::vector<CalibrationRow>& rows,
                                       const std::string& source) {
  if (max_g < 0 || max_k < 1 || max_k > kMaxVars) throw std::invalid_argument("calibrate: bad range");
  std::map<std::pair<int, int>, MultiPoly> table;
  for (const auto& r : rows) {
    if (r.g < 1 || r.g > max_g || r.k > max_k) continue;
    auto [it, inserted] = table.emplace(std::make_pair(r.g, r.k), r.poly);
    if (!inserted && !(it->second == r.poly)) throw InconsistentCalibration("contradictory rows for " + key_str(r.g, r.k));
  }
  for (const auto& [gk, p] : table) {
    auto [g, k] = gk;
    if (!is_symmetric(p)) throw InconsistentCalibration("row not symmetric " + key_str(g, k));
    if (p.is_zero() || !p.is_homogeneous() || p.degree() != 2 * g)
      throw InconsistentCalibration("row not homogeneous of degree 2g " + key_str(g, k));
    MultiPoly low = set_last_zero(p);
    if (k == 1 && !low.is_zero()) throw InconsistentCalibration("row fails string check " + key_str(g, k));
    auto prev = table.find({g, k - 1});
    if (k > 1 && prev != table.end() && !(prev->second == low))
      throw InconsistentCalibration("rows violate string specialization at " + key_str(g, k));
  }
  CalibrationResult res;
  std::ostringstream out;
  out << "# lambda_g DR_g psi_0^{g-2+k} base polynomials; higher k follow by string completion\n";
  out << "RANGE max_g=" << max_g << " max_k=" << max_k << "\n";
  for (int g = 1; g <= max_g; ++g)
    for (int k = 1; k <= std::min(2 * g, max_k); ++k) {
      auto it = table.find({g, k});
      if (it == table.end()) throw UncalibratedBase("calibration rows missing " + key_str(g, k));
      std::string checks = "symmetric,homogeneous,string";
      if (g <= 2 && hain_kernel(g, k, std::vector<int>(k, 0), g - 2 + k) == it->second) checks += ",oracle";
      out << "K0 g=" << g << " k=" << k << " poly=" << it->second.to_string() << " source=" << source
          << " checks=" << checks << "\n";
      res.constants += free_constant_count(2 * g, k);
      res.rows.emplace_back(g, k);
    }
  res.text = out.str();
  return res;
}

}  // namespace tautrel
