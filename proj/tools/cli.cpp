#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "heckelab/eigen_cache.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/hecke_algebra.hpp"
#include "heckelab/lfunc.hpp"
#include "heckelab/modular.hpp"
#include "heckelab/moments.hpp"
#include "heckelab/rho2.hpp"
#include "heckelab/sato_tate.hpp"
#include "heckelab/sums.hpp"
#include "heckelab/version.hpp"

namespace heckelab::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::vector<int> weights;
  std::int64_t primes = 1000;
  std::int64_t truncation = 0;  // 0: same as primes
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> us;
  int ell = 1;
  std::int64_t samples = 1'000'000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string cache_dir;
  std::string format = "json";
  std::string out;
  double umax = 10;
  double step = 1e-4;
  double every = 0.01;
  std::int64_t n_max = 0;
  std::int64_t limit = 0;
  int form = 0;
  double s_re = 2;
  double s_im = 0;
  std::int64_t terms = 10'000;

  // Everything that determines the artifact (paths excluded).
  json to_json() const {
    json j;
    j["command"] = command;
    j["weights"] = weights;
    j["primes"] = primes;
    j["truncation"] = truncation;
    j["x"] = xs;
    j["y"] = ys;
    j["u"] = us;
    j["ell"] = ell;
    j["samples"] = samples;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["workers"] = workers;
    j["format"] = format;
    j["umax"] = umax;
    j["step"] = step;
    j["every"] = every;
    j["n"] = n_max;
    j["limit"] = limit;
    j["form"] = form;
    j["s"] = {s_re, s_im};
    j["terms"] = terms;
    return j;
  }
};

struct Check {
  std::string name;
  bool passed = true;
  bool asserted = true;
  std::string detail;
};

struct Result {
  json doc = json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<Check> checks;
  std::vector<std::string> cache_keys;

  void check(std::string name, bool passed, std::string detail, bool asserted = true) {
    checks.push_back({std::move(name), passed, asserted, std::move(detail)});
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::int64_t v) { return std::to_string(v); }

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

struct Context {
  const RunConfig& cfg;
  EigenCache cache;
  std::ostream& err;

  std::vector<EigenForm> forms(int k, std::int64_t bound, Result& r) {
    r.cache_keys.push_back(EigenCache::key(k, bound));
    return cache.load_or_compute(k, bound);
  }
};

void require_weights(const RunConfig& c) {
  require(!c.weights.empty(), "--k is required");
  for (int k : c.weights) {
    require(k >= 12 && k % 2 == 0, "weights must be even and at least 12");
    require(cusp_form_dimension(k) >= 1, "S_k is zero for k = " + std::to_string(k));
  }
}

std::int64_t floor_int(double x) { return static_cast<std::int64_t>(std::floor(x)); }

// ---------------------------------------------------------------------------

Result cmd_eigen(Context& ctx) {
  const auto& c = ctx.cfg;
  require_weights(c);
  require(c.primes >= 2 && c.primes <= 10'000'000, "--primes must lie in [2, 1e7]");
  Result r;
  r.csv_header = {"k", "form", "p", "a_p", "lambda"};
  json weights = json::array();
  for (int k : c.weights) {
    const auto forms = ctx.forms(k, c.primes, r);
    json jw;
    jw["weight"] = k;
    jw["dimension"] = forms.size();
    jw["prime_bound"] = c.primes;
    jw["cache_key"] = EigenCache::key(k, c.primes);
    jw["exact"] = forms.front().has_exact_coefficients();
    jw["primes"] = std::vector<std::int64_t>(forms.front().primes().begin(), forms.front().primes().end());
    json jf = json::array();
    const std::int64_t deligne_bound = std::min<std::int64_t>(c.primes, 10'000);
    for (const auto& f : forms) {
      const auto rep = deligne_report(f, deligne_bound);
      json one;
      one["index"] = f.index();
      one["lambda"] = std::vector<double>(f.lambdas().begin(), f.lambdas().end());
      one["deligne"] = {{"bound", rep.bound}, {"max_ratio", rep.max_ratio}, {"argmax", rep.argmax}};
      jf.push_back(one);
      r.check("deligne k=" + std::to_string(k) + " form " + std::to_string(f.index()), rep.ok,
              "max |lambda(n)|/tau(n) = " + num(rep.max_ratio) + " for n <= " + num(rep.bound));
      for (auto p : f.primes())
        r.csv_rows.push_back({std::to_string(k), std::to_string(f.index()), num(p), f.coefficient_text(p),
                              num(f.lambda_p(p))});
    }
    jw["forms"] = jf;
    weights.push_back(jw);
  }
  r.doc["weights"] = weights;
  return r;
}

Result cmd_sums(Context& ctx) {
  const auto& c = ctx.cfg;
  require_weights(c);
  std::vector<double> xs = c.xs.empty() ? std::vector<double>{10, 100, 1000} : c.xs;
  std::sort(xs.begin(), xs.end());
  require(xs.front() >= 1, "--x values must be at least 1");
  require(xs.back() <= static_cast<double>(c.primes), "--x must not exceed --primes (coverage)");
  const std::int64_t limit = c.limit > 0 ? std::min(c.limit, c.primes) : c.primes;
  Result r;
  r.csv_header = {"k", "form", "x", "S", "S_over_xlogx"};
  json weights = json::array();
  for (int k : c.weights) {
    const auto forms = ctx.forms(k, c.primes, r);
    json jw;
    jw["weight"] = k;
    json jf = json::array();
    for (const auto& f : forms) {
      json one;
      one["index"] = f.index();
      json profile = json::array();
      const auto tau = divisor_tau_table(floor_int(xs.back()));
      for (const auto& s : sum_profile(f, xs)) {
        profile.push_back({{"x", s.x}, {"S", s.value}, {"normalized", s.normalized}, {"terms", s.term_count}});
        r.csv_rows.push_back({std::to_string(k), std::to_string(f.index()), num(s.x), num(s.value), num(s.normalized)});
        double envelope = 0;
        for (std::int64_t n = 1; n <= floor_int(s.x); ++n) envelope += static_cast<double>(tau[n]);
        if (std::abs(s.value) > envelope * (1 + 1e-12))
          r.check("deligne envelope k=" + std::to_string(k), false, "|S(" + num(s.x) + ")| exceeds sum tau");
      }
      one["profile"] = profile;
      const auto nf = first_sign_change(f, limit);
      one["first_sign_change"] = nf ? json(*nf) : json(nullptr);
      one["sign_limit"] = limit;
      const std::int64_t witness_to = nf ? *nf - 1 : std::min<std::int64_t>(limit, 1000);
      bool holds = true;
      std::int64_t checked = 0;
      for (std::int64_t x = 1; x <= witness_to; ++x) {
        const auto w = positivity_witness_check(f, static_cast<double>(x));
        if (w.applicable) ++checked;
        holds = holds && w.holds;
      }
      one["positivity_checked_up_to"] = witness_to;
      r.check("positivity k=" + std::to_string(k) + " form " + std::to_string(f.index()), holds,
              "S_f(x) >= sum h_x(n) for x <= " + num(witness_to) + " (" + num(checked) + " applicable)");
      jf.push_back(one);
    }
    jw["forms"] = jf;
    weights.push_back(jw);
  }
  r.doc["weights"] = weights;
  json hx = json::array();
  for (double x : xs) {
    if (x < 2) continue;
    const auto h = hx_sum(x);
    json row{{"x", x}, {"sum", h.value}, {"normalized", h.normalized}};
    if (x >= 10) {
      const auto hp = hx_prime_sum(x);
      row["prime_sum"] = hp.value;
      row["prime_sum_minus_2loglog"] = hp.difference;
      r.check("hx prime sum x=" + num(x), std::abs(hp.difference) <= 3, "difference " + num(hp.difference));
    }
    hx.push_back(row);
  }
  r.doc["hx"] = hx;
  return r;
}

Result cmd_friable(Context& ctx) {
  const auto& c = ctx.cfg;
  const std::vector<double> xs = c.xs.empty() ? std::vector<double>{1e6} : c.xs;
  const std::vector<double> us = (c.us.empty() && c.ys.empty()) ? std::vector<double>{1, 2, 3, 4} : c.us;
  std::vector<std::pair<double, double>> grid;
  for (double x : xs) {
    require(x >= 10 && x <= 1e9, "--x must lie in [10, 1e9]");
    for (double u : us) {
      require(u >= 1, "--u must be at least 1");
      grid.emplace_back(x, u == 1 ? x : std::pow(x, 1 / u));
    }
    for (double y : c.ys) grid.emplace_back(x, y);
  }
  double u_lo = 1, u_hi = 1;
  for (const auto& [x, y] : grid) {
    require(y >= 10 && y <= x, "friable grid needs 10 <= y <= x");
    u_hi = std::max(u_hi, std::log(x) / std::log(y));
  }
  const auto table = Rho2Table::build(std::ceil(u_hi) + 1, 1e-3);
  const double envelope = decay_envelope_constant(table, u_lo, std::max(u_hi, 1.0), 1.25);
  const auto scan = friable_decay_scan(grid, envelope);
  Result r;
  r.csv_header = {"x", "y", "u", "psi", "normalized", "bound_ratio"};
  json rows = json::array();
  for (const auto& row : scan.rows) {
    rows.push_back({{"x", row.x},
                    {"y", row.y},
                    {"u", row.u},
                    {"psi", row.psi},
                    {"normalized", row.normalized},
                    {"bound_ratio", row.bound_ratio}});
    r.csv_rows.push_back({num(row.x), num(row.y), num(row.u), num(row.psi), num(row.normalized), num(row.bound_ratio)});
  }
  r.doc["rows"] = rows;
  r.doc["envelope"] = envelope;
  r.doc["max_ratio"] = scan.max_ratio;
  r.check("decay envelope", scan.bounded, "max ratio " + num(scan.max_ratio) + " vs " + num(envelope));
  return r;
}

Result cmd_rho2(Context& ctx) {
  const auto& c = ctx.cfg;
  require(c.umax >= 1 && c.umax <= 50, "--umax must lie in [1, 50]");
  require(c.step > 0 && c.step <= 1e-3, "--step must lie in (0, 1e-3]");
  require(c.every >= c.step, "--every must be at least --step");
  const auto table = Rho2Table::build(c.umax, c.step);
  Result r;
  r.csv_header = {"u", "rho2"};
  json rows = json::array();
  const auto stride = static_cast<std::size_t>(std::llround(c.every / table.step()));
  const auto values = table.values();
  double min_value = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) min_value = std::min(min_value, values[i]);
    if (i % stride != 0 && i + 1 != values.size()) continue;
    rows.push_back({{"u", table.node(i)}, {"rho2", values[i]}});
    r.csv_rows.push_back({num(table.node(i)), num(values[i])});
  }
  r.doc["rows"] = rows;
  r.doc["step"] = table.step();
  r.doc["u_max"] = table.u_max();
  r.check("positive", min_value > 0, "min rho2 on (0, umax] = " + num(min_value));
  if (table.u_max() > 1) {
    const double res = table.max_residual(1, table.u_max());
    r.doc["max_residual"] = res;
    r.check("residual", res <= 1e-8, "max |u rho' - rho + 2 rho(u-1)| = " + num(res));
  }
  if (table.u_max() >= 2) {
    const double closed = 4 - 4 * std::numbers::ln2;
    const double err = std::abs(table.value(2) - closed);
    r.doc["rho2_at_2"] = table.value(2);
    r.check("closed form at 2", err <= 1e-6, "|rho2(2) - (4 - 4 ln 2)| = " + num(err));
    std::vector<std::pair<double, double>> pairs;
    if (c.xs.empty()) pairs.emplace_back(1e6, 1e3);
    for (double x : c.xs)
      for (double y : c.ys) pairs.emplace_back(x, y);
    json bruijn = json::array();
    for (const auto& [x, y] : pairs) {
      require(y >= 2 && y <= x && x <= 1e9, "bruijn pairs need 2 <= y <= x <= 1e9");
      const double u = std::log(x) / std::log(y);
      require(u <= table.u_max(), "u = log x / log y exceeds --umax");
      const double ratio = bruijn_ratio(table, x, y);
      bruijn.push_back({{"x", x}, {"y", y}, {"u", u}, {"ratio", ratio}});
      r.check("bruijn ratio x=" + num(x) + " y=" + num(y), ratio >= 0.75 && ratio <= 1.25, "ratio " + num(ratio),
              u <= 2 + 1e-12);
    }
    r.doc["bruijn"] = bruijn;
  }
  if (table.u_max() >= 5) {
    json prof = json::array();
    bool inside = true;
    for (const auto& row : decay_profile(table, 5, std::min(10.0, table.u_max()), 0.5)) {
      prof.push_back({{"u", row.u}, {"rho2", row.rho}, {"profile", row.profile}});
      inside = inside && row.profile >= 0.5 && row.profile <= 1.5;
    }
    r.doc["decay_profile"] = prof;
    // reported only: the profile is below 0.5 until u is about 6.5
    r.check("decay profile window [0.5, 1.5] on [5, 10]", inside, "see decay_profile", false);
  }
  return r;
}

json moment_json(const MomentEstimate& m) {
  return {{"mean", m.mean}, {"stderr", m.std_error}, {"samples", m.samples}, {"seed", m.seed}, {"ell", m.ell}, {"x", m.x}};
}

Result cmd_montecarlo(Context& ctx) {
  const auto& c = ctx.cfg;
  require(c.seed.has_value(), "--seed is required for montecarlo");
  require(c.xs.size() == 1, "montecarlo takes exactly one --x");
  const double x = c.xs.front();
  require(x >= 1 && x <= 1e4, "--x must lie in [1, 1e4]");
  require(c.ell >= 0 && c.ell <= 10, "--ell must lie in [0, 10]");
  require(c.samples >= 1 && c.samples <= 1'000'000'000, "--n must lie in [1, 1e9]");
  const MonteCarloOptions opts{c.samples, *c.seed, c.workers};
  Result r;
  const auto est = mc_moment(x, c.ell, opts);
  r.doc["estimate"] = moment_json(est);
  r.doc["workers"] = c.workers;
  r.csv_header = {"x", "ell", "samples", "seed", "mean", "stderr", "exact"};
  std::string exact_text;
  try {
    const auto exact = exact_moment(floor_int(x), c.ell);
    exact_text = exact.get_str();
    r.doc["exact"] = exact_text;
    const double gap = std::abs(est.mean - exact.get_d());
    r.check("monte carlo vs exact", gap <= 4 * est.std_error + 1e-12 * exact.get_d(),
            "|mean - exact| = " + num(gap) + ", 4 stderr = " + num(4 * est.std_error));
  } catch (const BudgetExceeded&) {
    r.doc["exact"] = nullptr;
  }
  r.csv_rows.push_back({num(x), std::to_string(c.ell), num(c.samples), std::to_string(*c.seed), num(est.mean),
                        num(est.std_error), exact_text});
  if (!c.ys.empty()) {
    const double y = c.ys.front();
    require(y >= 2 && y <= x, "--y must lie in [2, x]");
    const auto cmp = restricted_vs_full_moment(x, y, c.ell, opts);
    r.doc["restricted"] = {{"y", y},
                           {"full", moment_json(cmp.full)},
                           {"restricted", moment_json(cmp.restricted)},
                           {"ordered", cmp.ordered}};
    r.check("full >= restricted", cmp.ordered, "paired samples");
    const auto cond = conditioning_bound(x, y, c.ell, opts);
    r.doc["conditioning"] = {{"epsilon", cond.epsilon},
                             {"per_prime_probability", cond.per_prime_probability},
                             {"prime_count", cond.prime_count},
                             {"probability", cond.probability},
                             {"correction", cond.correction},
                             {"psi_tau", cond.psi_tau},
                             {"bound", cond.bound},
                             {"moment", cond.moment},
                             {"moment_exact", cond.moment_exact},
                             {"moment_stderr", cond.moment_stderr}};
    r.check("conditioning lower bound", cond.holds, "moment " + num(cond.moment) + " vs bound " + num(cond.bound));
  }
  return r;
}

std::int64_t truncation_of(const RunConfig& c) { return c.truncation > 0 ? c.truncation : c.primes; }

Result cmd_moments(Context& ctx) {
  const auto& c = ctx.cfg;
  require_weights(c);
  const double x = c.xs.empty() ? 2.0 : c.xs.front();
  require(x >= 1 && x <= static_cast<double>(c.primes), "--x must lie in [1, primes]");
  require(c.ell >= 0 && c.ell <= 6, "--ell must lie in [0, 6]");
  const std::int64_t trunc = truncation_of(c);
  require(trunc >= 2 && trunc <= c.primes, "--truncation must lie in [2, primes]");
  Result r;
  r.csv_header = {"k", "x", "ell", "moment", "random_model", "difference"};
  json weights = json::array();
  for (int k : c.weights) {
    const auto forms = ctx.forms(k, c.primes, r);
    const auto w = harmonic_weights(forms, trunc);
    const auto m = harmonic_moment(forms, w, x, c.ell);
    const std::vector<double> thresholds{0.25, 0.5, 1.0};
    const auto big = large_sum_search(forms, x, thresholds);
    json jw;
    jw["weight"] = k;
    jw["truncation"] = trunc;
    jw["omega"] = w.omegas();
    jw["omega_sum"] = w.total;
    jw["moment"] = m.moment;
    jw["random_model"] = m.random_model ? json(*m.random_model) : json(nullptr);
    jw["difference"] = m.difference;
    jw["in_proven_range"] = m.in_proven_range;
    json counts = json::array();
    for (const auto& [t, n] : big.exceed_counts) counts.push_back({{"threshold", t}, {"forms", n}});
    jw["large_sums"] = {{"y", big.y},
                        {"S", big.sums},
                        {"psi_tau_y", big.psi_tau_y},
                        {"max_over_xlogx", big.max_over_xlogx},
                        {"max_over_psi", big.max_over_psi},
                        {"max_over_divisor_sum", big.max_over_divisor_sum},
                        {"exceed_counts", counts}};
    r.check("deligne envelope k=" + std::to_string(k), big.max_over_divisor_sum <= 1 + 1e-9,
            "max |S|/sum tau = " + num(big.max_over_divisor_sum));
    weights.push_back(jw);
    r.csv_rows.push_back({std::to_string(k), num(x), std::to_string(c.ell), num(m.moment),
                          m.random_model ? num(*m.random_model) : "", num(m.difference)});
  }
  r.doc["weights"] = weights;
  return r;
}

Result cmd_petersson(Context& ctx) {
  const auto& c = ctx.cfg;
  require_weights(c);
  const std::int64_t trunc = truncation_of(c);
  require(trunc >= 2 && trunc <= c.primes, "--truncation must lie in [2, primes]");
  Result r;
  r.csv_header = {"k", "n", "average", "deviation"};
  json weights = json::array();
  for (int k : c.weights) {
    const auto forms = ctx.forms(k, c.primes, r);
    const auto w = harmonic_weights(forms, trunc);
    const std::int64_t proven = static_cast<std::int64_t>(k) * k / 10'000;
    const std::int64_t n_max = c.n_max > 0 ? c.n_max : std::max<std::int64_t>(proven, 1);
    require(n_max <= c.primes, "--n must not exceed --primes");
    json jw;
    jw["weight"] = k;
    jw["truncation"] = trunc;
    jw["omega"] = w.omegas();
    jw["omega_sum"] = w.total;
    std::vector<double> errs;
    for (const auto& f : w.forms) errs.push_back(f.l_value.error_estimate);
    jw["sym2_error_estimates"] = errs;
    std::vector<double> kw;
    for (const auto& f : w.forms) kw.push_back(f.k_omega);
    jw["k_omega"] = kw;
    r.check("omega sum k=" + std::to_string(k), w.total >= 0.95 && w.total <= 1.05, "sum = " + num(w.total));
    json rows = json::array();
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const auto p = petersson_check(forms, w, n);
      rows.push_back({{"n", n}, {"average", p.average}, {"deviation", p.deviation}});
      r.csv_rows.push_back({std::to_string(k), num(n), num(p.average), num(p.deviation)});
      if (n == 1) r.check("petersson n=1 k=" + std::to_string(k), p.deviation == 0.0, "deviation " + num(p.deviation));
      else if (n <= proven)
        r.check("petersson n=" + num(n) + " k=" + std::to_string(k), std::abs(p.deviation) <= 0.02,
                "deviation " + num(p.deviation));
    }
    jw["rows"] = rows;
    weights.push_back(jw);
  }
  r.doc["weights"] = weights;
  return r;
}

Result cmd_lfun(Context& ctx) {
  const auto& c = ctx.cfg;
  require_weights(c);
  const double x = c.xs.empty() ? 1e4 : c.xs.front();
  require(x >= 2 && x <= static_cast<double>(c.primes), "--x must lie in [2, primes]");
  const std::vector<double> ys = c.ys.empty() ? std::vector<double>{100, std::pow(10.0, 2.5), 1000} : c.ys;
  require(c.terms >= 2 && c.terms <= c.primes, "--terms must lie in [2, primes]");
  const Complex s(c.s_re, c.s_im);
  require(c.s_re >= 1 + 1 / std::log(static_cast<double>(c.terms)), "Re s must be at least 1 + 1/log terms");
  Result r;
  r.csv_header = {"k", "form", "x", "y", "S", "Psi_lambda", "D", "normalized_residual"};
  json weights = json::array();
  for (int k : c.weights) {
    const auto forms = ctx.forms(k, c.primes, r);
    require(c.form >= 0 && c.form < static_cast<int>(forms.size()), "--form out of range");
    const auto& f = forms[static_cast<std::size_t>(c.form)];
    const auto rep = friable_approx_check(f, x, ys);
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"x", row.x},
                      {"y", row.y},
                      {"S", row.sum},
                      {"Psi_lambda", row.psi_lambda},
                      {"D", row.difference},
                      {"normalized_residual", row.normalized}});
      r.csv_rows.push_back({std::to_string(k), std::to_string(c.form), num(row.x), num(row.y), num(row.sum),
                            num(row.psi_lambda), num(row.difference), num(row.normalized)});
      if (row.y >= row.x) r.check("D = 0 at y >= x", row.difference == 0.0, "D = " + num(row.difference));
    }
    r.check("friable residual bounded k=" + std::to_string(k), rep.bounded,
            "max normalized residual " + num(rep.max_normalized) + " <= " + num(rep.constant));
    const auto tl = truncated_L(f, s, c.terms);
    json diag = json::array();
    for (double y : ys) {
      require(y <= static_cast<double>(c.primes), "--y must not exceed --primes");
      const auto d = log_ratio_diagnostic(f, s, y, c.terms);
      const Complex ly = euler_Ly(f, s, y);
      diag.push_back({{"y", y},
                      {"euler_Ly", {ly.real(), ly.imag()}},
                      {"log_difference", d.valid ? json(d.difference) : json(nullptr)},
                      {"relative_tail_bound", d.tail_bound},
                      {"valid", d.valid}});
    }
    weights.push_back({{"weight", k},
                       {"form", c.form},
                       {"rows", rows},
                       {"max_normalized_residual", rep.max_normalized},
                       {"truncated_L", {tl.value.real(), tl.value.imag()}},
                       {"terms", tl.terms},
                       {"tail_bound", tl.tail_bound},
                       {"log_ratio", diag},
                       {"note", "weight dependence through log k is not observable at these weights"}});
  }
  r.doc["weights"] = weights;
  r.doc["s"] = {c.s_re, c.s_im};
  return r;
}

// ---------------------------------------------------------------------------

std::string render(const Result& r, const RunConfig& c) {
  if (c.format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.csv_header.size(); ++i) os << (i ? "," : "") << r.csv_header[i];
    os << '\n';
    for (const auto& row : r.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return os.str();
  }
  return r.doc.dump(2) + "\n";
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out, "write the artifact here (plus <out>.manifest.json)");
  sub->add_option("--cache-dir", c.cache_dir, "eigenvalue cache directory (default $HECKELAB_CACHE_DIR)");
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 256u));
}

void add_weights(CLI::App* sub, RunConfig& c) {
  sub->add_option("--k", c.weights, "weights (comma separated)")->delimiter(',')->required();
  sub->add_option("--primes", c.primes, "prime bound P of the eigenvalue tables");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"heckelab: Hecke eigenvalue sums, friable sums and the Sato-Tate model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto* eigen = app.add_subcommand("eigen", "build or load eigenvalue tables");
  add_weights(eigen, c);
  add_common(eigen, c);

  auto* sums = app.add_subcommand("sums", "partial sums, first sign changes, h_x profiles");
  add_weights(sums, c);
  sums->add_option("--x", c.xs, "x grid")->delimiter(',');
  sums->add_option("--limit", c.limit, "search bound for the first sign change (default: primes)");
  add_common(sums, c);

  auto* friable = app.add_subcommand("friable", "Psi(x, y; tau) decay scan");
  friable->add_option("--x", c.xs, "x values")->delimiter(',');
  friable->add_option("--u", c.us, "u values (y = x^{1/u})")->delimiter(',');
  friable->add_option("--y", c.ys, "explicit y values")->delimiter(',');
  add_common(friable, c);

  auto* rho2 = app.add_subcommand("rho2", "rho_2 table and Bruijn ratios");
  rho2->add_option("--umax", c.umax, "table end");
  rho2->add_option("--step", c.step, "grid step");
  rho2->add_option("--every", c.every, "spacing of emitted rows");
  rho2->add_option("--x", c.xs, "x values for Bruijn ratios")->delimiter(',');
  rho2->add_option("--y", c.ys, "y values for Bruijn ratios")->delimiter(',');
  add_common(rho2, c);

  auto* mc = app.add_subcommand("montecarlo", "random model moments");
  mc->add_option("--x", c.xs, "x")->required();
  mc->add_option("--ell", c.ell, "moment order l (computes E|sum X(n)|^{2l})");
  mc->add_option("--n", c.samples, "samples");
  mc->add_option("--seed", c.seed, "seed (required)");
  mc->add_option("--y", c.ys, "friable cutoff for the restricted/conditioning comparison");
  add_common(mc, c);

  auto* moments = app.add_subcommand("moments", "harmonic moments against the random model");
  add_weights(moments, c);
  moments->add_option("--truncation", c.truncation, "Euler product truncation for L(1, Sym^2 f)");
  moments->add_option("--x", c.xs, "x");
  moments->add_option("--ell", c.ell, "moment order l");
  add_common(moments, c);

  auto* pet = app.add_subcommand("petersson", "harmonic averages of lambda_f(n)");
  add_weights(pet, c);
  pet->add_option("--truncation", c.truncation, "Euler product truncation for L(1, Sym^2 f)");
  pet->add_option("--n", c.n_max, "largest n (default k^2/10^4)");
  add_common(pet, c);

  auto* lfun = app.add_subcommand("lfun", "friable approximation of S_f(x) and L-function diagnostics");
  add_weights(lfun, c);
  lfun->add_option("--form", c.form, "form index");
  lfun->add_option("--x", c.xs, "x");
  lfun->add_option("--y", c.ys, "y grid")->delimiter(',');
  lfun->add_option("--s", c.s_re, "real part of s");
  lfun->add_option("--t", c.s_im, "imaginary part of s");
  lfun->add_option("--terms", c.terms, "Dirichlet series terms N");
  add_common(lfun, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  c.command = app.get_subcommands().front()->get_name();

  const auto cache_dir = c.cache_dir.empty() ? EigenCache::default_directory() : std::filesystem::path(c.cache_dir);
  Context ctx{c, EigenCache(cache_dir, [&err](const std::string& m) { err << "warning: " << m << '\n'; }), err};
  Result result;
  try {
    if (c.command == "eigen") result = cmd_eigen(ctx);
    else if (c.command == "sums") result = cmd_sums(ctx);
    else if (c.command == "friable") result = cmd_friable(ctx);
    else if (c.command == "rho2") result = cmd_rho2(ctx);
    else if (c.command == "montecarlo") result = cmd_montecarlo(ctx);
    else if (c.command == "moments") result = cmd_moments(ctx);
    else if (c.command == "petersson") result = cmd_petersson(ctx);
    else result = cmd_lfun(ctx);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  const json config = c.to_json();
  const std::string config_hash = [&] {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
    return std::string(buf);
  }();
  json checks = json::array();
  bool failed = false;
  for (const auto& ch : result.checks) {
    checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"asserted", ch.asserted}, {"detail", ch.detail}});
    if (ch.asserted && !ch.passed) {
      failed = true;
      err << "check failed: " << ch.name << " (" << ch.detail << ")\n";
    }
  }
  result.doc["checks"] = checks;
  result.doc["command"] = c.command;
  result.doc["config"] = config;
  result.doc["config_hash"] = config_hash;
  result.doc["cache_keys"] = result.cache_keys;
  result.doc["version"] = kVersion;

  const std::string text = render(result, c);
  if (c.out.empty()) {
    out << text;
  } else {
    const std::filesystem::path path(c.out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    json manifest;
    manifest["artifact"] = path.filename().string();
    manifest["config"] = config;
    manifest["config_hash"] = config_hash;
    manifest["cache_keys"] = result.cache_keys;
    manifest["version"] = kVersion;
    manifest["format"] = c.format;
    manifest["checks_passed"] = !failed;
    std::ofstream m(path.string() + ".manifest.json", std::ios::binary | std::ios::trunc);
    m << manifest.dump(2) << '\n';
    if (!f || !m) {
      err << "error: cannot write " << c.out << '\n';
      return kValidationError;
    }
  }
  return failed ? kCheckFailed : kOk;
}

}  // namespace heckelab::cli
