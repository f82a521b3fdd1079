#include "tnlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "tnlab/arith.hpp"
#include "tnlab/constructor.hpp"
#include "tnlab/distribution.hpp"
#include "tnlab/errors.hpp"
#include "tnlab/heights.hpp"
#include "tnlab/interval_lab.hpp"
#include "tnlab/runge.hpp"
#include "tnlab/tn_engine.hpp"

namespace tnlab::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kAutoSieveMin = 1 << 16;
constexpr std::uint64_t kAutoSieveMax = 1 << 28;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  json result = json::object();
  std::optional<Table> table;
};

struct Params {
  // shared
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t sieve_limit = 0;

  std::uint64_t n = 0;
  std::string n_text;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t x = 0;
  std::vector<long double> c;
  long double y = 0;
  std::uint64_t L = 0;
  long double delta = 0.25L;
  std::uint64_t J = 0;
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint64_t> bs;
  std::uint64_t limit = 0;
  std::uint64_t cap = 0;
  bool brute = false;
  bool kernel = false;
  bool shortcut = false;
  bool witness = false;
  bool timings = false;
  std::vector<long double> u;
  long double step = 0.25L;
  std::string kind;
  int degree = 3;
  std::string H = "1";
  std::uint64_t s = 0;
  long double constant = 1;
  std::size_t family = 4096;
};

// Which options the user set, for the current subcommand.
struct Given {
  const CLI::App* app = nullptr;
  bool operator()(const std::string& name) const { return app->count(name) > 0; }
};

std::string fmt15(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return buf;
}

json num15(long double v) {
  if (!std::isfinite(v)) return fmt15(v);
  return std::stod(fmt15(v));
}

json big(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return v.get_si();
  return v.get_str();
}

template <typename T>
std::string join(const std::vector<T>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt15(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

json num_list(const std::vector<long double>& v) {
  json a = json::array();
  for (const auto x : v) a.push_back(num15(x));
  return a;
}

std::uint64_t auto_limit(std::uint64_t need) {
  return std::clamp<std::uint64_t>(need, kAutoSieveMin, kAutoSieveMax);
}

std::uint64_t env_sieve_limit() {
  const char* v = std::getenv("TNLAB_SIEVE_LIMIT");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const auto r = std::strtoull(v, &end, 10);
  if (*end != '\0' || r == 0) throw UsageError(std::string("TNLAB_SIEVE_LIMIT is not a positive integer: ") + v);
  return r;
}

json dyadic_coeffs(const RationalPoly& p) {
  json a = json::array();
  for (const auto& d : p.coeffs()) a.push_back({{"num", big(d.num())}, {"scale", d.scale()}});
  return a;
}

std::string render_csv(const std::string& command, const json& config, const json& summary, const Table& t) {
  std::ostringstream os;
  auto comment = [&](const std::string& prefix, const json& obj) {
    for (const auto& [k, v] : obj.items()) {
      std::string val;
      if (v.is_string()) {
        val = v.get<std::string>();
      } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) val += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      } else {
        val = v.dump();
      }
      os << "# " << prefix << k << "=" << val << "\n";
    }
  };
  os << "# tnlab " << command << "\n";
  comment("", config);
  comment("result.", summary);
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
    rows.push_back(o);
  }
  return rows;
}

// ---- subcommands ----

Output do_tn(const Params& p, const Given& given, const SpfTable& table) {
  TnOptions opts{.use_shortcut = p.shortcut, .shortcut_witness = true};
  if (given("--cap")) opts.cap = p.cap;
  const auto r = compute_tn(p.n, table, opts);
  Output o;
  o.result = {{"n", r.n},
              {"t", r.t},
              {"witness", r.witness},
              {"shortcut_used", r.shortcut_used},
              {"verified", verify_witness(r.n, r.witness, table)}};
  return o;
}

Output do_scan(const Params& p, const Given& given, const SpfTable& table) {
  if (p.lo < 1 || p.lo > p.hi) throw UsageError("need 1 <= lo <= hi");
  TnOptions opts{.use_shortcut = true, .shortcut_witness = p.witness};
  if (given("--cap")) opts.cap = p.cap;
  const auto rows = scan_tn(p.lo, p.hi, table, opts, p.workers);
  Output o;
  Table t{{"n", "t", "witness", "shortcut", "cap_exceeded"}, {}};
  std::uint64_t flagged = 0;
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.t), join(r.witness), r.shortcut_used ? "1" : "0",
                      r.cap_exceeded ? "1" : "0"});
    flagged += r.cap_exceeded;
  }
  o.result = {{"rows", rows.size()}, {"cap_exceeded", flagged}};
  o.table = std::move(t);
  return o;
}

Output do_interval(const Params& p, const Given&, const SpfTable& table) {
  if (p.brute && p.kernel) throw UsageError("--brute and --kernel are exclusive");
  const auto mode = p.brute ? SubsetMode::brute : SubsetMode::kernel;
  const auto y = static_cast<std::uint64_t>(std::floor(p.y));
  const auto rep = check_interval_identity(p.lo, p.hi, y, mode, table);
  const auto subsets = enumerate_square_subsets(p.lo, p.hi, mode, table);
  Output o;
  o.result = {{"lo", rep.lo},
              {"hi", rep.hi},
              {"y", rep.y},
              {"mode", mode == SubsetMode::brute ? "brute" : "kernel"},
              {"B", rep.B},
              {"count", big(rep.square_subset_count)},
              {"kernel_dim", subsets.kernel_dim},
              {"smooth_count", rep.smooth_count},
              {"pi_y", rep.pi_y},
              {"count_identity_holds", rep.count_identity_holds},
              {"smooth_bound_holds", rep.smooth_bound_holds},
              {mode == SubsetMode::brute ? "subsets" : "kernel_basis", subsets.subsets}};
  return o;
}

Output do_dist(const Params& p, const Given&, const SpfTable& table) {
  const auto d = distribution_table(p.x, p.c, table, p.workers);
  Output o;
  Table t{{"c", "threshold", "count_tn", "count_smooth", "diff", "normalized_diff", "rho_prediction"}, {}};
  for (const auto& r : d.rows) {
    t.rows.push_back({fmt15(r.c), std::to_string(r.threshold), std::to_string(r.count_tn),
                      std::to_string(r.count_smooth), std::to_string(r.diff), fmt15(r.normalized_diff),
                      fmt15(r.rho_prediction)});
  }
  o.result = {{"exceptional_count", d.exceptional_count}, {"excluded", d.excluded}};
  o.table = std::move(t);
  return o;
}

Output do_rho(const Params& p, const Given&, const SpfTable&) {
  std::vector<long double> us = p.u;
  if (us.empty()) {
    if (!(p.step > 0)) throw UsageError("--step must be positive");
    const long double top = static_cast<long double>(p.limit);
    for (std::uint64_t k = 0;; ++k) {
      const long double v = static_cast<long double>(k) * p.step;
      if (v > top + 1e-12L) break;
      us.push_back(v);
    }
  }
  for (const auto v : us)
    if (!(v >= 0 && v <= kRhoMaxU)) throw UsageError("u must lie in [0, 50]");
  Output o;
  Table t{{"u", "rho"}, {}};
  for (const auto v : us) t.rows.push_back({fmt15(v), fmt15(dickman_rho(v))});
  o.result = {{"points", us.size()}};
  o.table = std::move(t);
  return o;
}

PipelineOptions pipeline_options(const Params& p, const Given& given) {
  PipelineOptions opts;
  if (given("--y")) opts.y = p.y;
  if (given("--L")) opts.L = p.L;
  opts.delta = p.delta;
  opts.seed = p.seed;
  opts.family_size = p.family;
  return opts;
}

json parameters_json(const PipelineParameters& pp) {
  return {{"y", num15(pp.y)}, {"L_formula", num15(pp.L_formula)}, {"L", pp.L}};
}

Output do_construct(const Params& p, const Given& given, const SpfTable& table) {
  const auto run = run_small_tn_pipeline(p.x, table, pipeline_options(p, given), p.workers);
  Output o;
  Table t{{"lo", "hi", "smooth_count", "n", "offsets", "t_bound", "verified"}, {}};
  for (const auto& e : run.entries) {
    std::vector<std::string> row{std::to_string(e.interval.lo), std::to_string(e.interval.hi),
                                 std::to_string(e.interval.smooth_count)};
    if (e.certificate) {
      const auto& off = e.certificate->offsets;
      row.push_back(std::to_string(e.certificate->n));
      row.push_back(join(off));
      row.push_back(std::to_string(off.empty() ? 0 : off.back()));
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    row.push_back(e.verified ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
  o.result = {{"parameters", parameters_json(run.parameters)},
              {"intervals", run.entries.size()},
              {"successes", run.successes}};
  o.table = std::move(t);
  return o;
}

Output do_curve_point(const Params& p, const Given& given, const SpfTable& table) {
  const auto cert = construct_curve_point(p.x, p.c.front(), table, pipeline_options(p, given));
  Output o;
  o.result = {{"c", num15(cert.c)},
              {"n", cert.n},
              {"J", cert.J},
              {"N", cert.N},
              {"offsets", cert.offsets},
              {"parity_empty", cert.parity_empty},
              {"required_N", cert.required_N},
              {"meets_exponent", cert.meets_exponent},
              {"parameters", parameters_json(cert.parameters)},
              {"interval", {{"lo", cert.interval.lo}, {"hi", cert.interval.hi}, {"smooth_count", cert.interval.smooth_count}}},
              {"pi_y", cert.pi_y},
              {"kernel_dim", cert.kernel_dim},
              {"intervals_found", cert.intervals_found},
              {"bucket_size", cert.bucket_size}};
  if (p.timings) {
    const auto& tm = cert.timings;
    o.result["timings_ms"] = {{"parameters", tm.parameters_ms}, {"intervals", tm.intervals_ms},
                              {"kernel", tm.kernel_ms},         {"family", tm.family_ms},
                              {"symdiff", tm.symdiff_ms},       {"verify", tm.verify_ms}};
  }
  return o;
}

Output do_pell(const Params& p, const Given& given, const SpfTable&) {
  const std::uint64_t limit = given("--limit") ? p.limit : 1'000'000;
  const auto r = pell_solutions(p.J, limit);
  Output o;
  Table t{{"x", "y"}, {}};
  for (const auto& s : r.solutions) t.rows.push_back({std::to_string(s.x), std::to_string(s.y)});
  o.result = {{"solutions", r.solutions.size()}, {"brute_limit", r.brute_limit}, {"brute_agrees", r.brute_agrees}};
  o.table = std::move(t);
  return o;
}

json report_json(const HeightBoundReport& r) {
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  return {{"label", r.label},
          {"quantity", r.quantity},
          {"value", num15(r.value)},
          {"inputs", inputs},
          {"constant_policy", r.constant_policy}};
}

Output do_bounds(const Params& p, const Given& given, const SpfTable& table) {
  Output o;
  if (p.kind == "beg") {
    mpz_class H;
    if (H.set_str(p.H, 10) != 0) throw UsageError("--H must be a decimal integer");
    o.result = report_json(beg_log_bound(p.degree, H));
  } else if (p.kind == "small-s") {
    std::optional<long double> c;
    if (given("--constant")) c = p.constant;
    o.result = report_json(small_s_log_bound(p.s, p.J, c));
  } else {
    mpz_class n;
    if (n.set_str(p.n_text, 10) != 0) throw UsageError("--n must be a decimal integer");
    o.result = report_json(tn_lower_bound_eval(n, p.constant));
    if (given("--x")) {
      const auto chk = tn_lower_bound_check(p.x, p.constant, table, p.workers);
      o.result["check"] = {{"x", chk.x}, {"scanned", chk.scanned}, {"violations", chk.violations}};
    }
  }
  return o;
}

Output do_select_omega(const Params& p, const Given&, const SpfTable&) {
  const auto s = select_low_omega(p.bs, p.J);
  Output o;
  json checks = json::array();
  for (const auto& c : s.union_checks)
    checks.push_back({{"r", c.r}, {"union_size", c.union_size}, {"rhs", num15(c.rhs)}, {"holds", c.holds}});
  o.result = {{"indices", s.indices},
              {"omegas", s.omegas},
              {"order", s.order},
              {"union_checks", checks},
              {"union_inequality_holds", s.union_inequality_holds},
              {"selection_bound_holds", s.selection_bound_holds}};
  return o;
}

Output do_runge(const Params& p, const Given&, const SpfTable&) {
  const auto r = runge_decompose(p.offsets);
  const auto& d = r.decomposition;
  json P = json::array();
  for (const auto& q : d.P) P.push_back(big(q));
  Output o;
  o.result = {{"u", d.u},
              {"J", r.J},
              {"P", P},
              {"f", {{"text", d.f.str()}, {"coeffs", dyadic_coeffs(d.f)}}},
              {"g", {{"text", d.g.str()}, {"coeffs", dyadic_coeffs(d.g)}}},
              {"g_is_zero", d.g_is_zero},
              {"reconstructs", d.reconstructs},
              {"bounds",
               {{"a_bound", r.bounds.a_bound},
                {"denominators", r.bounds.denominators},
                {"b_bound", r.bounds.b_bound},
                {"degree_g", r.bounds.degree_g},
                {"all", r.bounds.all()}}},
              {"height_bound", r.height_bound.get_str()}};
  if (p.limit > 0) {
    json pts = json::array();
    for (const auto& pt : search_integral_points(p.offsets, p.limit, p.workers))
      pts.push_back({{"x", pt.x}, {"y", big(pt.y)}});
    o.result["points"] = pts;
  }
  return o;
}

Output do_conjecture(const Params& p, const Given&, const SpfTable& table, bool want_rows) {
  const auto r = conjecture_scan(p.x, p.c.front(), table, p.workers, want_rows);
  Output o;
  o.result = {{"scanned", r.scanned}, {"min_ratio", num15(r.min_ratio)}, {"argmin", r.argmin}};
  if (want_rows) {
    Table t{{"n", "t", "ratio"}, {}};
    for (const auto& e : r.entries) t.rows.push_back({std::to_string(e.n), std::to_string(e.t), fmt15(e.ratio)});
    o.table = std::move(t);
  }
  return o;
}

// ---- wiring ----

struct Command {
  std::string name;
  std::string help;
  bool tabular = false;  // CSV by default
  std::vector<std::string> options;  // echoed into the config
};

void add_shared(CLI::App* sub, Params& p) {
  sub->add_option("--out", p.out, "output file (default stdout)");
  sub->add_option("--format", p.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", p.seed, "sampling seed");
  sub->add_option("--workers", p.workers, "worker threads")->check(CLI::Range(1u, 256u));
  sub->add_option("--sieve-limit", p.sieve_limit, "smallest-prime-factor table size")->check(CLI::PositiveNumber);
}

json option_value(const Params& p, const std::string& name) {
  if (name == "--n") return p.n;
  if (name == "--n-text") return p.n_text;
  if (name == "--lo") return p.lo;
  if (name == "--hi") return p.hi;
  if (name == "--x") return p.x;
  if (name == "--c") return num_list(p.c);
  if (name == "--y") return num15(p.y);
  if (name == "--L") return p.L;
  if (name == "--delta") return num15(p.delta);
  if (name == "--J") return p.J;
  if (name == "--offsets") return p.offsets;
  if (name == "--bs") return p.bs;
  if (name == "--limit") return p.limit;
  if (name == "--cap") return p.cap;
  if (name == "--brute") return p.brute;
  if (name == "--kernel") return p.kernel;
  if (name == "--shortcut") return p.shortcut;
  if (name == "--witness") return p.witness;
  if (name == "--timings") return p.timings;
  if (name == "--u") return num_list(p.u);
  if (name == "--step") return num15(p.step);
  if (name == "--kind") return p.kind;
  if (name == "--degree") return p.degree;
  if (name == "--H") return p.H;
  if (name == "--s") return p.s;
  if (name == "--constant") return num15(p.constant);
  if (name == "--family") return p.family;
  return nullptr;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"tnlab: t_n, smooth numbers and height bounds"};
  app.require_subcommand(1, 1);

  auto* tn = app.add_subcommand("tn", "t_n with a witness");
  tn->add_option("--n", p.n, "n")->required()->check(CLI::PositiveNumber);
  tn->add_option("--cap", p.cap, "largest offset searched");
  tn->add_flag("--shortcut", p.shortcut, "use the largest-prime shortcut where it applies");

  auto* scan = app.add_subcommand("scan", "t_n for every n in [lo, hi]");
  scan->add_option("--lo", p.lo, "first n")->required();
  scan->add_option("--hi", p.hi, "last n")->required();
  scan->add_option("--cap", p.cap, "largest offset searched");
  scan->add_flag("--witness", p.witness, "recover witnesses for shortcut rows too");

  auto* interval = app.add_subcommand("interval", "square subsets of (lo, hi]");
  interval->add_option("--lo", p.lo, "exclusive lower end")->required();
  interval->add_option("--hi", p.hi, "inclusive upper end")->required();
  interval->add_option("--y", p.y, "smoothness bound")->required();
  interval->add_flag("--brute", p.brute, "enumerate all subsets");
  interval->add_flag("--kernel", p.kernel, "kernel basis (default)");

  auto* dist = app.add_subcommand("dist", "counts of t_n <= x^c against P+(n) <= x^c");
  dist->add_option("--x", p.x, "range end")->required()->check(CLI::PositiveNumber);
  dist->add_option("--c", p.c, "exponent, repeatable");

  auto* rho = app.add_subcommand("rho", "Dickman rho");
  rho->add_option("--u", p.u, "points, repeatable");
  rho->add_option("--limit", p.limit, "grid end when no --u is given");
  rho->add_option("--step", p.step, "grid step");

  auto* construct = app.add_subcommand("construct", "small t_n certificates over smooth-rich intervals");
  auto* curve = app.add_subcommand("curve-point", "square product n (n + J) prod (n + j_i)");
  for (auto* sub : {construct, curve}) {
    sub->add_option("--x", p.x, "range end")->required()->check(CLI::PositiveNumber);
    sub->add_option("--y", p.y, "smoothness bound override");
    sub->add_option("--L", p.L, "interval length override");
    sub->add_option("--delta", p.delta, "smooth-rich threshold factor");
  }
  curve->add_option("--c", p.c, "exponent")->required();
  curve->add_option("--family", p.family, "candidate subsets sampled")->check(CLI::PositiveNumber);
  curve->add_flag("--timings", p.timings, "include stage timings (not reproducible)");

  auto* pell = app.add_subcommand("pell", "x >= 1 with x (x + J) a square");
  pell->add_option("--J", p.J, "J")->required()->check(CLI::PositiveNumber);
  pell->add_option("--limit", p.limit, "brute-force cross-check limit");

  auto* bounds = app.add_subcommand("bounds", "explicit height and t_n bounds");
  bounds->add_option("--kind", p.kind, "beg, small-s or tn-lower")
      ->required()
      ->check(CLI::IsMember({"beg", "small-s", "tn-lower"}));
  bounds->add_option("--degree", p.degree, "polynomial degree (beg)");
  bounds->add_option("--H", p.H, "polynomial height (beg)");
  bounds->add_option("--s", p.s, "s (small-s)");
  bounds->add_option("--J", p.J, "J (small-s)");
  bounds->add_option("--constant", p.constant, "implied constant");
  bounds->add_option("--n", p.n_text, "n (tn-lower), any size");
  bounds->add_option("--x", p.x, "also check exact t_n for n <= x (tn-lower)");

  auto* omega = app.add_subcommand("select-omega", "three entries with fewest prime factors");
  omega->add_option("--bs", p.bs, "comma list")->required()->delimiter(',');
  omega->add_option("--J", p.J, "J")->required();

  auto* runge = app.add_subcommand("runge", "P = f^2 + g for prod (x + j_i)");
  runge->add_option("--offsets", p.offsets, "comma list starting at 0")->required()->delimiter(',');
  runge->add_option("--limit", p.limit, "search integral points with x <= limit");

  auto* conj = app.add_subcommand("conjecture", "min of t_n / (ln n)^(1-c) over n <= x");
  conj->add_option("--x", p.x, "range end")->required();
  conj->add_option("--c", p.c, "exponent");

  for (auto* sub : app.get_subcommands({})) add_shared(sub, p);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const Given given{sub};

  // Defaults that depend on the subcommand.
  if (name == "dist" && p.c.empty()) p.c = {0.4L, 0.5L, 0.6L, 0.8L};
  if (name == "conjecture" && p.c.empty()) p.c = {0.5L};
  if (name == "rho" && !given("--limit")) p.limit = 10;
  if ((name == "curve-point" || name == "conjecture") && p.c.size() != 1) {
    throw UsageError("--c takes exactly one value for " + name);
  }
  if (name == "bounds") {
    if (p.kind == "small-s" && (!given("--s") || !given("--J"))) throw UsageError("small-s needs --s and --J");
    if (p.kind == "tn-lower" && !given("--n")) throw UsageError("tn-lower needs --n");
  }

  const std::set<std::string> tabular{"scan", "dist", "rho", "construct", "pell"};
  const std::string format = !p.format.empty() ? p.format : tabular.count(name) ? "csv" : "json";
  const bool csv = format == "csv";
  const std::set<std::string> has_rows{"scan", "dist", "rho", "construct", "pell", "conjecture"};
  if (csv && !has_rows.count(name)) throw UsageError(name + " has no tabular output; use --format json");

  // Sieve table size: flag, then environment, then what the command needs.
  std::uint64_t need = 0;
  if (name == "tn") need = 2 * p.n + 4096;
  if (name == "scan") need = 2 * p.hi + 4096;
  if (name == "interval") need = p.hi + 1;
  if (name == "dist" || name == "construct" || name == "curve-point" || name == "conjecture") need = 2 * p.x + 4096;
  if (name == "bounds" && given("--x")) need = 2 * p.x + 4096;
  std::uint64_t sieve = p.sieve_limit;
  if (sieve == 0) sieve = env_sieve_limit();
  if (sieve == 0 && need > 0) sieve = auto_limit(need);

  json config = json::object();
  config["command"] = name;
  for (const auto* opt : sub->get_options()) {
    const auto lname = opt->get_lnames();
    if (lname.empty()) continue;
    const std::string flag = "--" + lname.front();
    static const std::set<std::string> shared{"--out", "--format", "--seed", "--workers", "--sieve-limit", "--help"};
    if (shared.count(flag)) continue;
    if (!given(flag) && (flag == "--cap" || flag == "--y" || flag == "--L")) continue;
    config[lname.front()] = option_value(p, flag == "--n" && name == "bounds" ? "--n-text" : flag);
  }
  if (name == "pell" && !given("--limit")) config["limit"] = 1'000'000;
  config["format"] = format;
  config["seed"] = p.seed;
  config["workers"] = p.workers;
  if (sieve > 0) config["sieve_limit"] = sieve;

  std::ofstream file;
  if (!p.out.empty()) {
    file.open(p.out, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write " + p.out);
  }

  std::optional<SpfTable> table_storage;
  if (sieve > 0) table_storage.emplace(sieve);
  static const SpfTable empty_table(2);
  const SpfTable& table = table_storage ? *table_storage : empty_table;

  Output o;
  if (name == "tn") o = do_tn(p, given, table);
  else if (name == "scan") o = do_scan(p, given, table);
  else if (name == "interval") o = do_interval(p, given, table);
  else if (name == "dist") o = do_dist(p, given, table);
  else if (name == "rho") o = do_rho(p, given, table);
  else if (name == "construct") o = do_construct(p, given, table);
  else if (name == "curve-point") o = do_curve_point(p, given, table);
  else if (name == "pell") o = do_pell(p, given, table);
  else if (name == "bounds") o = do_bounds(p, given, table);
  else if (name == "select-omega") o = do_select_omega(p, given, table);
  else if (name == "runge") o = do_runge(p, given, table);
  else o = do_conjecture(p, given, table, csv);

  std::string text;
  if (csv) {
    text = render_csv(name, config, o.result, *o.table);
  } else {
    json doc = {{"tnlab", name}, {"config", config}, {"result", o.result}};
    if (o.table) doc["rows"] = table_json(*o.table);
    text = doc.dump(2) + "\n";
  }
  if (file.is_open()) {
    file << text;
    file.close();
    if (!file) throw ResourceError("failed writing " + p.out);
  } else {
    out << text;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "out of range: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PipelineFailed& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace tnlab::cli
