#include <doctest.h>

#include <cmath>
#include <random>

#include <mpfr.h>

#include "oracles.hpp"
#include "ternary/automaton.hpp"
#include "ternary/error.hpp"

using namespace ternary;

namespace {

// Digits (least significant first) of the r-digit string numbered `mask`.
std::vector<Digit> bits_of(std::uint64_t mask, unsigned r) {
  std::vector<Digit> d(r);
  for (unsigned i = 0; i < r; ++i) d[i] = (mask >> i) & 1;
  return d;
}

mpz_class value_of(const std::vector<Digit>& d) {
  mpz_class v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = 3 * v + d[i];
  return v;
}

// The low r digits of every M_i * value omit 2.
bool admissible_by_gmp(const std::vector<std::uint64_t>& ms, const std::vector<Digit>& d) {
  const mpz_class v = value_of(d);
  for (auto m : ms) {
    for (int digit : oracle::low_digits(v * mpz_class(static_cast<unsigned long>(m)), d.size())) {
      if (digit == 2) return false;
    }
  }
  return true;
}

std::uint64_t brute_count(const std::vector<std::uint64_t>& ms, unsigned r) {
  std::uint64_t n = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) n += admissible_by_gmp(ms, bits_of(mask, r));
  return n;
}

bool omits_two(const mpz_class& v) { return v.get_str(3).find('2') == std::string::npos; }

bool power_of_three(std::uint64_t m) {
  while (m % 3 == 0) m /= 3;
  return m == 1;
}

// log_3 of (1 + sqrt 5)/2 at 200 bits.
void log3_phi(mpfr_t out) {
  mpfr_t t;
  mpfr_init2(t, 200);
  mpfr_sqrt_ui(out, 5, MPFR_RNDN);
  mpfr_add_ui(out, out, 1, MPFR_RNDN);
  mpfr_div_2ui(out, out, 1, MPFR_RNDN);
  mpfr_log(out, out, MPFR_RNDN);
  mpfr_set_ui(t, 3, MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  mpfr_div(out, out, t, MPFR_RNDN);
  mpfr_clear(t);
}

double log3(double x) { return std::log(x) / std::log(3.0); }

double log3(const mpz_class& v) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return (std::log(m) + e * std::log(2.0)) / std::log(3.0);
}

}  // namespace

TEST_CASE("multiplier sets") {
  auto ms = MultiplierSet::parse("63, 7,1,9");
  CHECK(ms.values() == std::vector<std::uint64_t>{1, 7});
  CHECK(ms.to_string() == "1,7");
  CHECK(ms.original().size() == 4);
  CHECK(MultiplierSet::normalize({27}).is_trivial());
  CHECK_THROWS_AS(MultiplierSet::parse("1,,7"), ParseError);
  CHECK_THROWS_AS(MultiplierSet::parse("1,x"), ParseError);
  CHECK_THROWS_AS(MultiplierSet::normalize({1, 0}), InvalidArgument);
  CHECK_THROWS_AS(MultiplierSet::normalize({}), InvalidArgument);
}

TEST_CASE("small machines") {
  auto one = build_automaton(MultiplierSet::normalize({1}));
  REQUIRE(one.size() == 1);
  CHECK(one.next[0][0] == 0);
  CHECK(one.next[0][1] == 0);
  CHECK(count_prefixes(one, 5) == 32);
  CHECK(trim(one).size() == 1);
  CHECK(trim(one).edge_count() == 2);

  auto two = build_automaton(MultiplierSet::normalize({1, 2}));
  REQUIRE(two.size() == 1);
  CHECK(two.next[0][0] == 0);
  CHECK(two.next[0][1] == -1);
  CHECK(count_prefixes(two, 5) == 1);
  CHECK(brute_count({1, 2}, 5) == 1);
  CHECK(accepts_only_zero_word(trim(two)));
  CHECK_FALSE(accepts_only_zero_word(trim(one)));
  CHECK_THROWS_AS(accepts_only_zero_word(two), InvalidArgument);

  auto guard = MultiplierSet::normalize({1, 1000003});
  CHECK_THROWS_AS(build_automaton(guard, 100), SizeGuardExceeded);

  const std::string dot = to_dot(trim(build_automaton(MultiplierSet::normalize({1, 7}))));
  CHECK(dot.find("(0,0)") != std::string::npos);
  CHECK(dot.find("label=\"1\"") != std::string::npos);
}

TEST_CASE("property: machine structure") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::uint64_t> raw{1};
    const int extra = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < extra; ++i) raw.push_back(2 + rng() % 300);
    const auto ms = MultiplierSet::normalize(raw);
    const auto a = build_automaton(ms);
    CHECK(a.next[a.start][0] == static_cast<std::int32_t>(a.start));
    for (std::size_t s = 0; s < a.size(); ++s) {
      for (std::size_t i = 0; i < a.arity(); ++i) CHECK(a.carry(s, i) < a.multipliers[i]);
    }
    const auto t = trim(a);
    CHECK(t.trimmed);
    CHECK(t.next[t.start][0] == static_cast<std::int32_t>(t.start));
    for (std::size_t s = 0; s < t.size(); ++s) CHECK((t.next[s][0] >= 0 || t.next[s][1] >= 0));
  }
}

TEST_CASE("property: trimmed language is the extendable prefixes") {
  for (auto raw : std::vector<std::vector<std::uint64_t>>{{1, 2}, {1, 7}, {1, 49}, {1, 52}, {1, 4, 256}, {1, 13, 40}}) {
    const auto ms = MultiplierSet::normalize(raw);
    const auto full = build_automaton(ms);
    const auto t = trim(full);
    // A prefix that survives |states| more digits survives forever.
    const unsigned extra = static_cast<unsigned>(full.size());
    for (unsigned r = 1; r <= 8; ++r) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
        const auto d = bits_of(mask, r);
        bool extendable = false;
        for (std::uint64_t tail = 0; tail < (std::uint64_t{1} << extra) && !extendable; ++tail) {
          auto longer = d;
          for (unsigned i = 0; i < extra; ++i) longer.push_back((tail >> i) & 1);
          extendable = admissible_by_gmp(ms.values(), longer);
        }
        CHECK(accepts(t, d) == extendable);
      }
    }
  }
}

TEST_CASE("property: prefix counts match brute force") {
  std::mt19937_64 rng(7);
  int sets = 0;
  while (sets < 20) {
    std::vector<std::uint64_t> raw;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) raw.push_back(1 + rng() % 400);
    const auto ms = MultiplierSet::normalize(raw);
    const auto a = build_automaton(ms);
    if (a.size() > 1000) continue;
    ++sets;
    const unsigned r = 1 + static_cast<unsigned>(rng() % 14);
    CHECK_MESSAGE(count_prefixes(a, r) == brute_count(ms.values(), r), ms.to_string() << " r=" << r);
  }
}

TEST_CASE("dimension of C(1,7)") {
  const auto est = hausdorff_dimension(MultiplierSet::normalize({1, 7}));
  mpfr_t v;
  mpfr_init2(v, 200);
  log3_phi(v);
  CHECK(mpfr_cmp_d(v, est.lo) >= 0);
  CHECK(mpfr_cmp_d(v, est.hi) <= 0);
  mpfr_clear(v);
  CHECK(est.width() < 1e-9);
  CHECK(est.value == doctest::Approx(0.438018).epsilon(1e-6));
  CHECK(est.positive);

  const auto cp = exact_spectral_radius(trim(build_automaton(MultiplierSet::normalize({1, 7}))));
  CHECK(cp.factor == std::vector<mpz_class>{-1, -1, 1});
  CHECK(cp.closed_form == "(1+sqrt(5))/2");
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(cp.root_lo.get_d() <= phi);
  CHECK(phi <= cp.root_hi.get_d() + 1e-15);

  for (std::uint64_t j = 1, p = 3; j <= 3; ++j, p *= 3) {
    const auto shifted = hausdorff_dimension(MultiplierSet::normalize({1, 7 * p}));
    CHECK(shifted.lo == est.lo);
    CHECK(shifted.hi == est.hi);
  }
}

TEST_CASE("dimension examples") {
  const auto zero = hausdorff_dimension(MultiplierSet::normalize({1, 49}));
  CHECK(zero.exact);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == 0.0);
  CHECK_FALSE(zero.positive);
  CHECK_FALSE(accepts_only_zero_word(trim(build_automaton(MultiplierSet::normalize({1, 49})))));

  const auto four = hausdorff_dimension(MultiplierSet::normalize({1, 4}));
  CHECK(four.lo >= 0.31596 - 1e-6);
  CHECK(four.hi <= 0.5 + 1e-9);

  const auto full = hausdorff_dimension(MultiplierSet::normalize({1, 9}));
  CHECK(full.exact);
  CHECK(full.rho_lo == 2);
  CHECK(full.value == doctest::Approx(std::log(2.0) / std::log(3.0)));

  const auto cp = exact_spectral_radius(trim(build_automaton(MultiplierSet::normalize({1, 3}))));
  CHECK(cp.closed_form == "2");

  CHECK_THROWS_AS(exact_spectral_radius(trim(build_automaton(MultiplierSet::normalize({1, 970})))),
                  SizeGuardExceeded);
}

TEST_CASE("property: dimension range and full dimension only for {1}") {
  const double top = std::log(2.0) / std::log(3.0);
  for (std::uint64_t M = 1; M <= 400; ++M) {
    const auto est = hausdorff_dimension(MultiplierSet::normalize({1, M}));
    CHECK(est.lo >= 0.0);
    CHECK(est.lo <= est.hi);
    CHECK(est.hi <= top + 1e-15);
    CHECK((est.rho_hi == 2) == power_of_three(M));
    if (!power_of_three(M)) CHECK(est.rho_hi < 2);
  }
}

TEST_CASE("property: half-dimension bound for random M") {
  std::mt19937_64 rng(16);
  int done = 0;
  while (done < 500) {
    const std::uint64_t M = 1 + rng() % 10000;
    if (M % 3 == 0 || power_of_three(M)) continue;
    ++done;
    const auto est = hausdorff_dimension(MultiplierSet::normalize({1, M}));
    CHECK_MESSAGE(est.hi <= 0.5 + 1e-9, "M=" << M);
    CHECK(est.converged);
  }
}

TEST_CASE("property: counting bound from the half-dimension argument") {
  // For M = 1 mod 3 with first nonzero digit after d_0 at position m:
  // at most 3^(r/2 + 2m) admissible classes mod 3^r, r >= 2m.
  for (std::uint64_t M = 4; M <= 400; M += 3) {
    if (power_of_three(M)) continue;
    unsigned m = 1;
    for (std::uint64_t v = M / 3; v % 3 == 0; v /= 3) ++m;
    const auto counts = prefix_counts(build_automaton(MultiplierSet::normalize({1, M})), 40);
    for (unsigned r = 2 * m; r <= 40; ++r) {
      CHECK_MESSAGE(log3(counts[r]) <= r / 2.0 + 2 * m + 1e-12, "M=" << M << " r=" << r);
    }
  }
}

TEST_CASE("property: mod 3 classification") {
  for (std::uint64_t M = 2; M <= 1000; M += 3) {
    const auto t = trim(build_automaton(MultiplierSet::normalize({1, M})));
    CHECK(accepts_only_zero_word(t));
    CHECK(hausdorff_dimension(MultiplierSet::normalize({1, M})).hi == 0.0);
  }
  for (std::uint64_t M = 1; M <= 1000; M += 3) {
    const auto g = greedy_element(M, 64);
    REQUIRE(g.found);
    CHECK(g.verified);
    CHECK(g.digits.size() == 64);
    // One of the two digits always fits, so pure greedy never stalls.
    CHECK(g.backtracks == 0);
    CHECK(greedy_element(M, 64, false).found);
  }
}

TEST_CASE("greedy examples") {
  for (auto [M, r] : std::vector<std::pair<std::uint64_t, unsigned>>{{4, 4}, {7, 12}}) {
    const auto g = greedy_element(M, r);
    REQUIRE(g.found);
    CHECK(g.digits[0] == 1);
    CHECK(admissible_by_gmp({1, M}, g.digits));
  }
  const auto one = greedy_element(1, 10);
  CHECK(one.digits == std::vector<Digit>{1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(greedy_element(5, 10), InvalidArgument);
  CHECK_THROWS_AS(greedy_element(4, 0), InvalidArgument);
}

TEST_CASE("digit-2-free multiples") {
  const auto b = search_digit2free_multiple(MultiplierSet::normalize({1, 4, 256}), 10);
  REQUIRE(b.N.has_value());
  CHECK(*b.N == 1);
  CHECK(b.digits == 6);
  CHECK(b.bound == doctest::Approx(0.10515).epsilon(1e-4));
  CHECK(mpz_class(256).get_str(3) == "100111");

  const auto seven = search_digit2free_multiple(MultiplierSet::normalize({7}), 10000);
  REQUIRE(seven.N.has_value());
  CHECK(*seven.N == 4);
  CHECK(seven.products == std::vector<mpz_class>{28});
  CHECK(seven.bound == doctest::Approx(std::log(2.0) / std::log(3.0) / 4));
  for (long n = 1; n < 4; ++n) CHECK_FALSE((omits_two(n) && omits_two(7 * n)));

  const auto ms52 = MultiplierSet::normalize({1, 52});
  CHECK_FALSE(search_digit2free_multiple(ms52, 1000000).N.has_value());
  CHECK_FALSE(digit2free_multiple_exists(ms52).exists);
  CHECK(hausdorff_dimension(ms52).lo > 0.0);
}

TEST_CASE("property: exact multiple test agrees with search") {
  for (std::uint64_t M = 1; M <= 300; ++M) {
    const auto ms = MultiplierSet::normalize({M});
    const auto ex = digit2free_multiple_exists(ms);
    const auto found = search_digit2free_multiple(ms, 59049);
    if (found.N) CHECK_MESSAGE(ex.exists, "M=" << M);
    if (ex.exists) {
      REQUIRE(ex.witness.has_value());
      CHECK(omits_two(*ex.witness));
      CHECK(omits_two(*ex.witness * mpz_class(static_cast<unsigned long>(M))));
      if (found.N) CHECK(*ex.witness >= 1);
    }
  }
}

TEST_CASE("sigma subsets") {
  for (unsigned r : {6u, 12u, 18u}) {
    const auto rep = verify_sigma_subsets(r);
    CHECK(rep.ok());
    CHECK(rep.a_strings == (std::uint64_t{1} << (r / 2)));
    CHECK(rep.b_strings == (std::uint64_t{1} << (r / 6)));
    // Half of log_3 2 is 0.315465; the value 0.31596 quoted alongside it is off in the fourth digit.
    CHECK(rep.a_bound == doctest::Approx(0.315465).epsilon(1e-5));
    CHECK(rep.b_bound == doctest::Approx(0.10515).epsilon(1e-4));
  }
  // Independent reason: 4 = (11)_3 and 256 = (100111)_3 never overlap their blocks.
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    std::vector<Digit> d(12, 0);
    for (unsigned b = 0; b < 6; ++b) d[2 * b] = (mask >> b) & 1;
    CHECK(omits_two(4 * value_of(d)));
  }
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    std::vector<Digit> d(12, 0);
    d[0] = mask & 1;
    d[6] = (mask >> 1) & 1;
    CHECK(omits_two(4 * value_of(d)));
    CHECK(omits_two(256 * value_of(d)));
  }
  CHECK_THROWS_AS(verify_sigma_subsets(8), InvalidArgument);
  CHECK_THROWS_AS(verify_sigma_subsets(42), InvalidArgument);
}

TEST_CASE("problem scan") {
  const auto rep = scan_problems(100, 2);
  CHECK(rep.consistent);
  CHECK(std::find(rep.in_h_not_c.begin(), rep.in_h_not_c.end(), 52) != rep.in_h_not_c.end());
  for (const auto& row : rep.rows) {
    CHECK(row.M % 3 != 0);
    if (row.M % 3 == 2) CHECK_FALSE(row.in_h);
    if (row.M == 1) {
      CHECK(row.in_h);
      CHECK(row.in_c);
      CHECK(row.lo == doctest::Approx(std::log(2.0) / std::log(3.0)));
    }
  }
  CHECK(rep.count_c <= rep.count_h);
  CHECK_THROWS_AS(scan_problems(5000), InvalidArgument);
}

TEST_CASE("property: path-count norms approach the dimension from above") {
  for (std::uint64_t M : {7ull, 52ull, 379ull, 970ull}) {
    const auto ms = MultiplierSet::normalize({1, M});
    const auto est = hausdorff_dimension(ms);
    const auto norms = max_path_counts(trim(build_automaton(ms)), 600);
    for (unsigned r = 1; r <= 100; ++r) {
      CHECK(log3(norms[r]) / r >= est.lo - 1e-12);
      for (unsigned s = 1; s <= 100; ++s) CHECK(norms[r + s] <= norms[r] * norms[s]);
    }
    const double gap60 = log3(norms[60]) / 60 - est.value;
    const double gap600 = log3(norms[600]) / 600 - est.value;
    CHECK(gap600 <= gap60);
    CHECK(gap600 < 0.03);
  }
}
