#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "serialize.hpp"
#include "ternary/error.hpp"

using namespace ternary;
using cli::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kComputation = 2, kVerification = 3 };

struct RunConfig {
  long precision_cap = kDefaultPrecisionCap;
  unsigned threads = 0;
  std::uint64_t seed = 20261019;
  std::string format = "json";
  std::size_t state_guard = kDefaultStateGuard;
  unsigned sieve_depth = 12;
  bool timing = false;
};

// Usage problems found after parsing (bad combinations, malformed values).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  json result;
  std::string csv;
  std::string dot;
  std::vector<std::string> notes;
  int status = kOk;
};

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  throw UsageError("format '" + cfg.format + "' is not available for " + cmd);
}

void emit(const std::string& command, const RunConfig& cfg, const Output& out, double seconds) {
  if (cfg.format == "csv") {
    std::cout << out.csv;
    return;
  }
  if (cfg.format == "dot") {
    std::cout << out.dot;
    return;
  }
  json report;
  report["command"] = command;
  report["config"] = {{"precision_cap", cfg.precision_cap},
                      {"threads", cfg.threads},
                      {"seed", cfg.seed},
                      {"sieve_depth", cfg.sieve_depth},
                      {"state_guard", cfg.state_guard},
                      {"format", cfg.format}};
  report["result"] = out.result;
  report["notes"] = out.notes;
  if (cfg.timing) report["timing_seconds"] = seconds;
  std::cout << report.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ternary digits of powers of two, real and 3-adic orbits, and Cantor-set intersections"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  // The flag overrides the environment, which overrides the default.
  if (const char* env = std::getenv("TERNARY_PRECISION_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 256 || v > (1L << 30)) {
      std::cerr << "usage error: TERNARY_PRECISION_CAP must be an integer in [256, 2^30], got '" << env << "'\n";
      return kUsage;
    }
    cfg.precision_cap = v;
  }

  app.add_option("--precision-cap", cfg.precision_cap, "Largest MPFR precision in bits (>= 256)")
      ->check(CLI::Range(256L, 1L << 30));
  app.add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  app.add_option("--seed", cfg.seed, "Seed for randomized choices");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "dot"}));
  app.add_option("--state-guard", cfg.state_guard, "Largest carry automaton allowed")->check(CLI::Range(1UL, 1UL << 40));
  app.add_flag("--timing", cfg.timing, "Add wall-clock time to JSON reports (output is then not reproducible)");

  // sieve
  std::uint64_t max_exponent = 0;
  std::string lambda_text = "1";
  auto* sieve = app.add_subcommand("sieve", "Exponents n <= X with floor(lambda 2^n) free of the digit 2");
  sieve->add_option("--max-exponent", max_exponent, "X")->required();
  sieve->add_option("--residue-depth,--depth", cfg.sieve_depth, "Residue filter depth K")->check(CLI::Range(1u, 20u));
  sieve->add_option("--lambda", lambda_text, "Dyadic multiplier A or A/2^s");
  sieve->footer("CSV: n,expansion (one row per surviving exponent)");

  // cf
  std::size_t cf_depth = 40;
  auto* cf = app.add_subcommand("cf", "Continued fraction of log_3 2 with convergent checks");
  cf->add_option("--depth", cf_depth, "Last quotient index")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  cf->footer("CSV: index,a,p,q,side,growth_ok");

  // three-gap
  std::uint64_t gap_n = 0;
  std::string offset_text = "0";
  bool brute_check = false;
  auto* gap = app.add_subcommand("three-gap", "Arc lengths of x + j log_3 2 mod 1, j = 0..N");
  gap->add_option("--N", gap_n, "Number of rotation steps")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  gap->add_option("--offset", offset_text, "Starting point x in [0,1), decimal");
  gap->add_flag("--brute-check", brute_check, "Also sort the points and compare");
  gap->footer("CSV: length_fixed,length,multiplicity (length_fixed in units of 2^-256)");

  // census
  std::uint64_t census_max = 0;
  std::string census_lambda = "1";
  auto* census = app.add_subcommand("census", "Leading-digit census of floor(lambda 2^n), n <= X");
  census->add_option("--lambda", census_lambda, "Dyadic multiplier A/2^s");
  census->add_option("--max", census_max, "X")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{10000000}));
  census->footer("CSV: block,count,block_bound");

  // construct
  unsigned levels = 1;
  std::string policy_text = "min";
  std::uint64_t scan_limit = 100000;
  auto* construct = app.add_subcommand("construct", "Build a multiplier whose orbit keeps digit-2-free halves");
  construct->add_option("--levels", levels, "1 or 2")->check(CLI::IsMember({1u, 2u}));
  construct->add_option("--digit-policy", policy_text, "min, max, random or random:<seed>");
  construct->add_option("--scan-limit", scan_limit, "Exhaustive rejection bound for smaller l");
  construct->footer("CSV: k,l,r,m,d,M,admissible,claimed,violation. Exit 2 when a level cannot be built.");

  // dimension
  std::string mult_text;
  bool exact_charpoly = false;
  unsigned prefix_depth = 0;
  auto* dimension = app.add_subcommand("dimension", "Growth dimension of the carry automaton of C(M_1,...,M_k)");
  dimension->add_option("--multipliers", mult_text, "Comma separated list, e.g. 1,7")->required();
  dimension->add_flag("--exact-charpoly", exact_charpoly, "Characteristic polynomial and exact root (<= 64 states)");
  dimension->add_option("--prefix-depth", prefix_depth, "Prefix counts for r = 1..R")->check(CLI::Range(0u, 4000u));
  dimension->footer("CSV: r,count,slope (prefix table; needs --prefix-depth)");

  // scan
  std::uint64_t scan_max = 0;
  std::string scan_out;
  std::uint64_t search_bound = 100000;
  auto* scan = app.add_subcommand("scan", "Classify M <= X: positive dimension, digit-2-free multiple");
  scan->add_option("--max-M", scan_max, "X (at most 3000)")->required();
  scan->add_option("--out", scan_out, "Output format, same as --format")->check(CLI::IsMember({"json", "csv"}));
  scan->add_option("--search-bound", search_bound, "Largest N tried by the direct search");
  scan->footer("CSV: M,lo,hi,in_M_H,in_M_C,witness,search_N");

  // search-n
  std::string search_mult;
  std::string max_n_text = "10000";
  auto* search = app.add_subcommand("search-n", "Smallest N with N and every N M_i free of the digit 2");
  search->add_option("--multipliers", search_mult, "Comma separated list")->required();
  search->add_option("--max-N", max_n_text, "Search bound");
  search->footer("CSV: multipliers,N,digits,bound");

  // export-automaton
  std::string export_mult;
  bool untrimmed = false;
  auto* exporter = app.add_subcommand("export-automaton", "Write the carry automaton as DOT or JSON");
  exporter->add_option("--multipliers", export_mult, "Comma separated list")->required();
  exporter->add_flag("--untrimmed", untrimmed, "Keep states without infinite continuations");
  exporter->footer("Use --format dot or --format json. States are labelled by carry tuples, edges by input digit.");

  // verify
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("--criterion", only, "Run only these criteria (repeatable)")
      ->check(CLI::Range(1, kCriterionCount));
  verify->footer("CSV: id,title,pass,detail. Exit 3 when a criterion fails.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  if (scan->parsed() && !scan_out.empty()) cfg.format = scan_out;
  const mpfr_prec_t cap = static_cast<mpfr_prec_t>(cfg.precision_cap);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  Output out;
  try {
    if (*sieve) {
      require_format(cfg, {"json", "csv"}, command);
      SieveOptions opt;
      opt.max_exponent = max_exponent;
      opt.residue_depth = cfg.sieve_depth;
      opt.lambda = DyadicRational::parse(lambda_text);
      opt.threads = cfg.threads;
      const auto r = run_sieve(opt);
      out.result = cli::to_json(r);
      out.csv = cli::to_csv(r);
      out.notes = {"survivors: exponents whose floor(lambda 2^n) has no ternary digit 2",
                   "residue filter keeps t mod 2*3^(K-1) with the K low digits of lambda 2^t in {0,1}"};
    } else if (*cf) {
      require_format(cfg, {"json", "csv"}, command);
      const auto e = cf_log3_2(cf_depth, cap);
      const auto checks = verify_convergents(e);
      const auto growth = check_denominator_growth(e);
      out.result = cli::to_json(e, checks, growth);
      out.csv = cli::to_csv(e, checks, growth);
      out.notes = {"quotients certified from a directed-rounding enclosure of log_3 2",
                   "growth_ok: q_n <= 1200 q_{n-1}^13.3, decided exactly"};
    } else if (*gap) {
      require_format(cfg, {"json", "csv"}, command);
      const auto theta = RotationAngle::log3_2(40, 256, cap);
      mpz_class off;
      try {
        off = fixed_offset(offset_text, 256);
      } catch (const ParseError& e) {
        throw UsageError(e.what());
      }
      const auto g = three_gap(theta, gap_n);
      out.result = cli::to_json(g);
      out.result["offset"] = offset_text;
      if (brute_check) {
        const auto b = three_gap_bruteforce(theta, off, gap_n);
        out.result["brute_force"] = cli::to_json(b);
        out.result["brute_force_matches"] = same_spectrum(g, b, 3);
      }
      out.csv = cli::to_csv(g);
      out.notes = {"rotation by floor(log_3(2) 2^256) / 2^256; lengths exact in units of 2^-256",
                   "at most three lengths, the largest the sum of the other two"};
    } else if (*census) {
      require_format(cfg, {"json", "csv"}, command);
      const auto r = leading_digit_census(DyadicRational::parse(census_lambda), census_max, cap);
      out.result = cli::to_json(r);
      out.csv = cli::to_csv(r);
      out.notes = {"count: n <= X whose k leading digits of floor(lambda 2^n) omit 2",
                   "exact_count: n <= X whose full expansion omits 2"};
    } else if (*construct) {
      require_format(cfg, {"json", "csv"}, command);
      std::string text = policy_text;
      if (text == "random") text = "random:" + std::to_string(cfg.seed);
      const auto r = construct_cantor_lambda(levels, DigitPolicy::parse(text), cap, scan_limit);
      out.result = cli::to_json(r);
      out.csv = cli::to_csv(r);
      out.notes = {"lambda = sum d_j / 2^(m_j) with d_0 = 2; level k appends l_k doublings",
                   "M_k = lambda_k 2^(m_k) must omit the digit 1, so M_k / 2 omits 2"};
      if (!r.infeasible_reason.empty()) {
        std::cerr << "error: construction: " << r.infeasible_reason << '\n';
        out.status = kComputation;
      }
    } else if (*dimension) {
      require_format(cfg, {"json", "csv"}, command);
      const auto ms = MultiplierSet::parse(mult_text);
      DimensionOptions opt;
      opt.state_guard = cfg.state_guard;
      opt.prefix_depth = prefix_depth;
      const auto d = hausdorff_dimension(ms, opt);
      out.result = cli::to_json(d);
      if (exact_charpoly) {
        out.result["charpoly"] = cli::to_json(exact_spectral_radius(trim(build_automaton(ms, cfg.state_guard))));
      }
      out.csv = cli::to_csv(d);
      out.notes = {"value: log_3 of the spectral radius of the trimmed carry automaton",
                   "[lo, hi] certified by Collatz-Wielandt bounds and outward rounding",
                   "slopes: log_3(untrimmed prefix count)/r, a slowly converging cross-check"};
    } else if (*scan) {
      require_format(cfg, {"json", "csv"}, command);
      const auto r = scan_problems(scan_max, cfg.threads, kDefaultScanLimit, search_bound);
      out.result = cli::to_json(r);
      out.csv = cli::to_csv(r);
      out.notes = {"M_H: dimension of C(1,M) certified positive",
                   "M_C: some N > 0 with N and N M free of the digit 2, decided on the carry automaton"};
    } else if (*search) {
      require_format(cfg, {"json", "csv"}, command);
      const auto ms = MultiplierSet::parse(search_mult);
      mpz_class bound;
      if (bound.set_str(max_n_text, 10) != 0 || bound < 1) throw UsageError("--max-N must be a positive integer");
      const auto s = search_digit2free_multiple(ms, bound);
      out.result = cli::to_json(s);
      out.result["multipliers"] = ms.values();
      const auto ex = digit2free_multiple_exists(ms, cfg.state_guard);
      out.result["exists_any_N"] = ex.exists;
      out.csv = cli::to_csv(ms, s);
      out.notes = {"dimension_lower_bound: log_3(2) / (ternary digits of N M_k)"};
    } else if (*exporter) {
      require_format(cfg, {"json", "dot"}, command);
      const auto ms = MultiplierSet::parse(export_mult);
      auto a = build_automaton(ms, cfg.state_guard);
      if (!untrimmed) a = trim(a);
      out.result = cli::to_json(a);
      out.dot = to_dot(a);
    } else if (*verify) {
      require_format(cfg, {"json", "csv"}, command);
      AcceptanceOptions opt;
      opt.threads = cfg.threads;
      opt.precision_cap = cap;
      opt.seed = cfg.seed;
      std::vector<CriterionResult> results;
      if (only.empty()) {
        for (int i = 1; i <= kCriterionCount; ++i) only.push_back(i);
      }
      json arr = json::array();
      bool all = true;
      for (int id : only) {
        results.push_back(run_criterion(id, opt));
        std::cerr << format_result(results.back()) << '\n';
        arr.push_back(cli::to_json(results.back(), cfg.timing));
        all = all && results.back().pass;
      }
      out.result = {{"criteria", arr}, {"all_pass", all}};
      out.csv = cli::to_csv(results, cfg.timing);
      if (!all) out.status = kVerification;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kComputation;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(command, cfg, out, seconds);
  return out.status;
}
