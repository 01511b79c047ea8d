#include "ternary/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <mpfr.h>

#include "ternary/automaton.hpp"
#include "ternary/construction.hpp"
#include "ternary/error.hpp"
#include "ternary/sieve.hpp"
#include "ternary/three_gap.hpp"

namespace ternary {

namespace {

const char* const kTitles[kCriterionCount] = {
    "sieve exactness",
    "digit-count bounds",
    "residue structure",
    "three-distance spectra",
    "denominator growth",
    "dimension gold values",
    "half-dimension bound",
    "mod 3 classification",
    "Cantor subset chain",
    "first construction level",
    "prefix-count oracle",
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records the first failure only; later ones are usually consequences.
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail.str("");
      detail << "failed: " << what;
    }
  }
};

double log3_2() { return std::log(2.0) / std::log(3.0); }

bool power_of_three(std::uint64_t m) {
  while (m % 3 == 0) m /= 3;
  return m == 1;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

void sieve_exactness(Outcome& o, const AcceptanceOptions& opt) {
  SieveOptions s;
  s.threads = opt.threads ? opt.threads : 1;
  s.max_exponent = 4374;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_sieve(s);
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(r.survivors == std::vector<std::uint64_t>{0, 2, 8}, "survivors up to 4374 are " + join(r.survivors));
  o.require(took < 10.0, "4374 run took " + std::to_string(took) + " s");
  s.max_exponent = 100000;
  const auto big = run_sieve(s);
  o.require(big.survivors == std::vector<std::uint64_t>{0, 2, 8}, "survivors up to 1e5 are " + join(big.survivors));
  if (o.pass) o.detail << "survivors {0,2,8} up to 4374 (under 10 s) and up to 100000";
}

void digit_counts(Outcome& o) {
  for (std::uint64_t X : {100ull, 1000ull, 10000ull}) {
    if (o.pass && X != 100) o.detail << "; ";
    const auto t = count_tilde_N(PadicApprox(TernaryNat(1), 24), X);
    const double b = 2.0 * pow_alpha0(static_cast<double>(X));
    o.require(static_cast<double>(t.count) < b, "surrogate count " + std::to_string(t.count) + " at X=" +
                                                    std::to_string(X) + " vs " + std::to_string(b));
    const auto exact = count_N(DyadicRational(), X);
    const double nb = 1.62 * pow_alpha0(static_cast<double>(X));
    o.require(static_cast<double>(exact) < nb, "exact count " + std::to_string(exact) + " at X=" + std::to_string(X));
    if (o.pass) o.detail << "X=" << X << ": " << t.count << " < " << b << ", " << exact << " < " << nb;
  }
}

void residue_structure(Outcome& o) {
  for (unsigned k = 1; k <= 12; ++k) {
    const auto surv = residue_survivors(k);
    o.require(surv.size() == (std::size_t{1} << (k - 1)),
              "k=" + std::to_string(k) + " has " + std::to_string(surv.size()) + " survivors");
    if (k > 7) continue;
    // Brute force: 2^t mod 3^k by GMP, low k digits.
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), 3, k);
    std::vector<std::uint64_t> direct;
    for (std::uint64_t t = 0; t < residue_modulus(k); ++t) {
      mpz_class v;
      mpz_powm_ui(v.get_mpz_t(), mpz_class(2).get_mpz_t(), t, mod.get_mpz_t());
      bool ok = true;
      for (unsigned i = 0; i < k; ++i, v /= 3) ok = ok && (v % 3 != 2);
      if (ok) direct.push_back(t);
    }
    o.require(direct == surv, "k=" + std::to_string(k) + " differs from brute force");
  }
  if (o.pass) o.detail << "2^(k-1) survivors for k=1..12, brute force agrees for k<=7";
}

void three_distance(Outcome& o, const AcceptanceOptions& opt) {
  const auto theta = RotationAngle::log3_2(40, 256, opt.precision_cap);
  const mpz_class offsets[2] = {0, fixed_offset("0.3", 256)};
  std::size_t compared = 0;
  for (std::uint64_t N = 1; N <= 2000 && o.pass; ++N) {
    const auto f = three_gap(theta, N);
    o.require(f.distinct() <= 3, "N=" + std::to_string(N) + " has more than three lengths");
    o.require(f.lengths.size() < 3 || f.lengths[2] == f.lengths[0] + f.lengths[1],
              "N=" + std::to_string(N) + " largest length is not the sum");
    for (const auto& off : offsets) {
      o.require(same_spectrum(f, three_gap_bruteforce(theta, off, N), 3), "N=" + std::to_string(N) + " spectrum");
      ++compared;
    }
  }
  for (long n = 1; n <= 19 && o.pass; ++n) {
    const auto c = check_two_lengths(theta, n);
    o.require(c.two_lengths && c.ordered, "two-length ordering fails at n=" + std::to_string(n));
  }
  if (o.pass) o.detail << compared << " spectra match brute force; two-length ordering holds for n=1..19";
}

void denominator_growth(Outcome& o, const AcceptanceOptions& opt) {
  const auto cf = cf_log3_2(40, opt.precision_cap);
  const auto rows = check_denominator_growth(cf);
  std::size_t ok = 0;
  for (const auto& r : rows) {
    o.require(r.ok, "fails at n=" + std::to_string(r.index));
    ok += r.ok;
  }
  o.require(rows.size() >= 40, "only " + std::to_string(rows.size()) + " convergents");
  if (o.pass) o.detail << ok << " convergents satisfy q_n <= 1200 q_{n-1}^13.3 exactly";
}

void dimension_gold(Outcome& o) {
  const auto ms = MultiplierSet::normalize({1, 7});
  const auto est = hausdorff_dimension(ms);
  mpfr_t v, t;
  mpfr_inits2(200, v, t, (mpfr_ptr)0);
  mpfr_sqrt_ui(v, 5, MPFR_RNDN);
  mpfr_add_ui(v, v, 1, MPFR_RNDN);
  mpfr_div_2ui(v, v, 1, MPFR_RNDN);
  mpfr_log(v, v, MPFR_RNDN);
  mpfr_set_ui(t, 3, MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  mpfr_div(v, v, t, MPFR_RNDN);
  const bool inside = mpfr_cmp_d(v, est.lo) >= 0 && mpfr_cmp_d(v, est.hi) <= 0;
  mpfr_clears(v, t, (mpfr_ptr)0);
  o.require(inside, "enclosure misses log_3 of the golden ratio");
  o.require(est.width() < 1e-9, "enclosure width " + std::to_string(est.width()));
  const auto cp = exact_spectral_radius(trim(build_automaton(ms)));
  o.require(cp.closed_form == "(1+sqrt(5))/2", "exact root is '" + cp.closed_form + "'");
  for (std::uint64_t M = 1; M <= 100 && o.pass; ++M) {
    const auto base = hausdorff_dimension(MultiplierSet::normalize({1, M}));
    for (std::uint64_t j = 1, p = 3; j <= 3; ++j, p *= 3) {
      const auto sh = hausdorff_dimension(MultiplierSet::normalize({1, M * p}));
      o.require(sh.lo == base.lo && sh.hi == base.hi, "shift by 3^" + std::to_string(j) + " changes M=" +
                                                          std::to_string(M));
    }
  }
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "[%.12f, %.12f] width %.1e, exact root %s, 3-shift invariant for M<=100", est.lo,
                  est.hi, est.width(), cp.closed_form.c_str());
    o.detail << buf;
  }
}

void half_dimension(Outcome& o, double& limit) {
  limit = 300.0;
  double worst = 0.0;
  std::uint64_t at = 0;
  for (std::uint64_t M = 1; M <= 1000; ++M) {
    if (power_of_three(M)) continue;
    const auto est = hausdorff_dimension(MultiplierSet::normalize({1, M}));
    o.require(est.hi <= 0.5 + 1e-9, "M=" + std::to_string(M) + " upper end " + std::to_string(est.hi));
    if (est.hi > worst) {
      worst = est.hi;
      at = M;
    }
  }
  if (o.pass) o.detail << "largest upper end " << worst << " at M=" << at;
}

void mod3_classification(Outcome& o) {
  std::size_t zero = 0, greedy = 0;
  for (std::uint64_t M = 1; M <= 1000; ++M) {
    if (M % 3 == 2) {
      const auto t = trim(build_automaton(MultiplierSet::normalize({1, M})));
      o.require(accepts_only_zero_word(t), "M=" + std::to_string(M) + " accepts a nonzero word");
      o.require(hausdorff_dimension(MultiplierSet::normalize({1, M})).hi == 0.0,
                "M=" + std::to_string(M) + " has positive dimension");
      ++zero;
    } else if (M % 3 == 1) {
      const auto g = greedy_element(M, 64);
      o.require(g.found && g.verified, "greedy fails for M=" + std::to_string(M));
      ++greedy;
    }
  }
  if (o.pass) o.detail << zero << " machines accept only 0^inf, " << greedy << " greedy prefixes of length 64";
}

void subset_chain(Outcome& o, const AcceptanceOptions& opt) {
  for (unsigned r : {6u, 12u}) {
    const auto rep = verify_sigma_subsets(r);
    o.require(rep.ok(), "Cantor subsets not accepted at r=" + std::to_string(r));
  }
  const auto s = search_digit2free_multiple(MultiplierSet::normalize({1, 4, 256}), 10);
  o.require(s.N && *s.N == 1, "search for {1,4,256} did not return N=1");
  o.require(std::fabs(s.bound - 0.10515) < 5e-6, "bound " + std::to_string(s.bound));
  o.require(std::fabs(s.bound - log3_2() / 6) < 1e-15, "bound differs from log_3(2)/6");
  const auto d = hausdorff_dimension(MultiplierSet::normalize({1, 4}));
  o.require(d.lo >= 0.31596 - 1e-6 && d.hi <= 0.5 + 1e-9, "dim C(1,4) enclosure [" + std::to_string(d.lo) + ", " +
                                                              std::to_string(d.hi) + "]");
  const auto scan = scan_problems(100, opt.threads);
  const bool has52 =
      std::find(scan.in_h_not_c.begin(), scan.in_h_not_c.end(), std::uint64_t{52}) != scan.in_h_not_c.end();
  o.require(has52, "52 not in M_H \\ M_C");
  o.require(scan.consistent, "scan membership tests disagree");
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "subsets ok at r=6,12; N=1 bound %.5f; dim C(1,4) in [%.6f, %.6f]; 52 in M_H\\M_C",
                  s.bound, d.lo, d.hi);
    o.detail << buf;
  }
}

void first_level(Outcome& o, const AcceptanceOptions& opt) {
  const auto lk = find_lk(0, 1, 100000, opt.precision_cap);
  o.require(lk.l == 65 && lk.r == 41 && lk.exhaustive, "first level search gives l=" + lk.l.get_str());
  const std::string lead = leading_digits(pow2(65), 4);
  o.require(lead == "1000", "2^65 starts with " + lead);
  o.require(lk.leading_ok.value_or(false), "too few zeros after the leading 1 of 2^65");
  for (const char* policy : {"min", "max", "random:1"}) {
    const auto rep = construct_cantor_lambda(1, DigitPolicy::parse(policy), opt.precision_cap);
    o.require(rep.levels_built == 1, std::string("level 1 not built for ") + policy);
    if (rep.levels_built != 1) continue;
    const auto& lv = rep.levels[0];
    o.require(lv.p1 && lv.p2 && lv.floor_ok && lv.even && lv.half_digit2free && rep.all_ok(),
              std::string("level 1 properties fail for ") + policy + ": " + lv.violation);
  }
  const auto two = construct_cantor_lambda(2, DigitPolicy::parse("min"), opt.precision_cap);
  const bool reported = two.levels_built == 2 ? two.all_ok() : !two.infeasible_reason.empty() && !two.unbuilt.empty();
  o.require(reported, "level 2 neither built nor reported infeasible");
  if (o.pass) {
    o.detail << "l=65, r=41 exhaustive; 2^65 = (1000...)_3; level 1 ok for min/max/random; level 2: "
             << (two.levels_built == 2 ? "built" : "infeasible, l_2 = " + two.unbuilt[0].l.get_str());
  }
}

// Brute force over all 2^r strings with mul_small, independent of the machine.
std::uint64_t brute_count(const std::vector<std::uint64_t>& ms, unsigned r) {
  std::uint64_t n = 0;
  std::vector<Digit> d(r);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    for (unsigned i = 0; i < r; ++i) d[i] = (mask >> i) & 1;
    const TernaryNat v = TernaryNat::from_digits(d);
    bool ok = true;
    for (auto m : ms) ok = ok && omits_digit(mul_small(v, m).low_digits(r), 2);
    n += ok;
  }
  return n;
}

void prefix_oracle(Outcome& o, const AcceptanceOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  int sets = 0;
  while (sets < 20) {
    std::vector<std::uint64_t> raw;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) raw.push_back(1 + rng() % 500);
    const auto ms = MultiplierSet::normalize(raw);
    const auto a = build_automaton(ms);
    if (a.size() > 1000) continue;
    ++sets;
    const unsigned r = 1 + static_cast<unsigned>(rng() % 14);
    const auto counted = count_prefixes(a, r);
    const auto brute = brute_count(ms.values(), r);
    o.require(counted == brute, "{" + ms.to_string() + "} r=" + std::to_string(r) + ": " + counted.get_str() +
                                    " vs " + std::to_string(brute));
  }
  if (o.pass) o.detail << sets << " random multiplier sets agree with 2^r enumeration";
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  if (id < 1 || id > kCriterionCount) throw InvalidArgument("acceptance", "no criterion " + std::to_string(id));
  CriterionResult res;
  res.id = id;
  res.title = kTitles[id - 1];
  Outcome o;
  double limit = 0.0;  // seconds, 0 for none
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: sieve_exactness(o, opt); break;
      case 2: limit = 30.0; digit_counts(o); break;
      case 3: residue_structure(o); break;
      case 4: limit = 60.0; three_distance(o, opt); break;
      case 5: denominator_growth(o, opt); break;
      case 6: dimension_gold(o); break;
      case 7: half_dimension(o, limit); break;
      case 8: mod3_classification(o); break;
      case 9: subset_chain(o, opt); break;
      case 10: first_level(o, opt); break;
      case 11: prefix_oracle(o, opt); break;
    }
  } catch (const Error& e) {
    o.require(false, e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit > 0.0) o.require(res.seconds < limit, "took " + std::to_string(res.seconds) + " s");
  res.pass = o.pass;
  res.detail = o.detail.str();
  return res;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, opt));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %-24s (%.2f s)  ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace ternary
