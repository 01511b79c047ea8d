#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"
#include "ternary/error.hpp"
#include "ternary/sieve.hpp"

using namespace ternary;

namespace {

// Independent route to the surviving residues: list every digit-{0,1} unit
// modulo 3^k, then take discrete logs base 2 from a lookup table.
std::set<std::uint64_t> survivors_by_discrete_log(unsigned k) {
  std::uint64_t mod = 1;
  for (unsigned i = 0; i < k; ++i) mod *= 3;
  std::map<std::uint64_t, std::uint64_t> dlog;
  std::uint64_t v = 1;
  for (std::uint64_t t = 0; t < 2 * mod / 3; ++t) {
    dlog.emplace(v, t);
    v = 2 * v % mod;
  }
  std::set<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
    if ((mask & 1) == 0) continue;  // units only
    std::uint64_t value = 0, p = 1;
    for (unsigned i = 0; i < k; ++i, p *= 3) value += ((mask >> i) & 1) * p;
    out.insert(dlog.at(value));
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate digit-2-free powers of two") {
  CHECK(enumerate_digit2free_powers(10) == std::vector<std::uint64_t>{0, 2, 8});
  CHECK(enumerate_digit2free_powers(1) == std::vector<std::uint64_t>{0});
  CHECK(enumerate_digit2free_powers(4374) == std::vector<std::uint64_t>{0, 2, 8});
}

TEST_CASE("enumeration agrees with direct digit checks") {
  std::vector<std::uint64_t> direct;
  for (unsigned long n = 0; n <= 600; ++n) {
    if (oracle::ternary_omits(oracle::pow2_base3(n), '2')) direct.push_back(n);
  }
  CHECK(enumerate_digit2free_powers(600) == direct);
}

TEST_CASE("residue survivors") {
  CHECK(residue_survivors(1) == std::vector<std::uint64_t>{0});
  CHECK(residue_survivors(2) == std::vector<std::uint64_t>{0, 2});
  for (unsigned k = 1; k <= 12; ++k) {
    CHECK(residue_survivors(k).size() == (1ull << (k - 1)));
  }
  for (unsigned k = 1; k <= 7; ++k) {
    auto fast = residue_survivors(k);
    CHECK(std::set<std::uint64_t>(fast.begin(), fast.end()) == survivors_by_discrete_log(k));
  }
}

TEST_CASE("property: residue filters refine each other") {
  for (unsigned k = 1; k < 10; ++k) {
    auto coarse = residue_survivors(k);
    std::set<std::uint64_t> coarse_set(coarse.begin(), coarse.end());
    for (auto t : residue_survivors(k + 1)) CHECK(coarse_set.count(t % residue_modulus(k)) == 1);
  }
}

TEST_CASE("property: sieve soundness") {
  auto sols = enumerate_digit2free_powers(3000);
  for (unsigned k = 1; k <= 12; ++k) {
    auto surv = residue_survivors(k);
    std::set<std::uint64_t> s(surv.begin(), surv.end());
    for (auto n : sols) CHECK(s.count(n % residue_modulus(k)) == 1);
  }
}

TEST_CASE("sieve report invariants") {
  SieveOptions opts;
  opts.max_exponent = 20000;
  auto r = run_sieve(opts);
  CHECK(r.survivors == std::vector<std::uint64_t>{0, 2, 8});
  REQUIRE(r.counts_per_k.size() == 12);
  CHECK(r.counts_per_k[0] == 10001);  // even exponents only
  for (std::size_t k = 1; k < r.counts_per_k.size(); ++k) CHECK(r.counts_per_k[k] <= r.counts_per_k[k - 1]);
  REQUIRE(r.narkiewicz_ok.has_value());
  CHECK(*r.narkiewicz_ok);
  CHECK(r.count_n_ge_1 == 2);

  opts.threads = 3;
  auto r3 = run_sieve(opts);
  CHECK(r3.survivors == r.survivors);
  CHECK(r3.counts_per_k == r.counts_per_k);

  opts.residue_depth = 0;
  CHECK_THROWS_AS(run_sieve(opts), InvalidArgument);
}

TEST_CASE("sieve with dyadic lambda matches count_N") {
  for (const char* text : {"1/4", "3", "5/8", "7", "13/2^5"}) {
    SieveOptions opts;
    opts.max_exponent = 300;
    opts.lambda = DyadicRational::parse(text);
    opts.residue_depth = 6;
    auto r = run_sieve(opts);
    std::vector<std::uint64_t> direct;
    for (std::uint64_t n = 0; n <= 300; ++n) {
      if (omits_digit(floor_lambda_pow2(opts.lambda, n), 2)) direct.push_back(n);
    }
    CHECK_MESSAGE(r.survivors == direct, text);
    CHECK(r.count_n_ge_1 == count_N(opts.lambda, 300));
    CHECK_FALSE(r.narkiewicz_ok.has_value());
  }
}

TEST_CASE("count_N") {
  CHECK(count_N(DyadicRational::parse("1"), 100) == 2);
  // floor(2^(n-2)) for n <= 10: n in {2, 4, 10} give 2^0, 2^2, 2^8, and n = 1
  // gives floor(1/2) = 0, which omits every digit.
  std::uint64_t brute = 0;
  for (int n = 1; n <= 10; ++n) {
    mpz_class v = 1;
    v <<= n;
    v /= 4;
    if (v == 0 || v.get_str(3).find('2') == std::string::npos) ++brute;
  }
  CHECK(brute == 4);
  CHECK(count_N(DyadicRational::parse("1/4"), 10) == brute);
  CHECK(count_N(DyadicRational::parse("3"), 100) == 2);
}

TEST_CASE("count_tilde_N") {
  auto one = PadicApprox(TernaryNat(1), 12);
  auto small = count_tilde_N(one, 10);
  CHECK(small.digits_tested == 3);
  CHECK(small.count >= 2);
  CHECK(small.within_bound);

  auto big = count_tilde_N(one, 10000);
  CHECK(big.digits_tested == 9);
  CHECK(big.count <= 256);
  CHECK(big.count <= 664);
  CHECK(big.within_bound);

  // lambda = 2 (mod 3): every even n gives a low digit 2. Brute force the rest.
  auto two = PadicApprox::parse("0120102112");
  auto res = count_tilde_N(two, 50);
  mpz_class lam = 0;
  for (char c : two.to_string()) lam = lam * 3 + (c - '0');
  std::uint64_t brute = 0;
  mpz_class mod = 1;
  for (unsigned i = 0; i < res.digits_tested; ++i) mod *= 3;
  for (int n = 1; n <= 50; ++n) {
    mpz_class y = lam << n;
    y %= mod;
    auto d = oracle::low_digits(y, res.digits_tested);
    bool ok = std::find(d.begin(), d.end(), 2) == d.end();
    if (n % 2 == 0) CHECK_FALSE(ok);
    brute += ok;
  }
  CHECK(res.count == brute);

  // Powers of 3 in lambda shift digits and leave the count unchanged.
  auto shifted = PadicApprox::parse("01201021120");
  CHECK(count_tilde_N(shifted, 50).count == brute);
  CHECK(count_tilde_N(shifted, 50).valuation == 1);

  CHECK_THROWS_AS(count_tilde_N(PadicApprox(TernaryNat(1), 3), 100), InsufficientPrecision);
  CHECK_THROWS_AS(count_tilde_N(PadicApprox(TernaryNat(0), 10), 10), InsufficientPrecision);
}

TEST_CASE("packed representation matches pow2") {
  detail::PackedTernary p(TernaryNat(1));
  unsigned long n = 0;
  for (unsigned step : {1u, 5u, 31u, 31u, 17u, 2u, 30u}) {
    p.mul_pow2(step);
    n += step;
    auto value = pow2(n);
    CHECK(p.to_ternary_nat() == value);
    auto digits = value.digits();
    auto it = std::find(digits.begin(), digits.end(), Digit{2});
    long long expect = it == digits.end() ? -1 : it - digits.begin();
    CHECK(p.first_two() == expect);
  }
}

TEST_CASE("property: N(X) <= 1.62 X^(log_3 2) up to 10^5") {
  auto sols = enumerate_digit2free_powers(100000);
  CHECK(sols == std::vector<std::uint64_t>{0, 2, 8});
  for (std::uint64_t X = 1; X <= 100000; ++X) {
    auto n1 = std::count_if(sols.begin(), sols.end(), [X](auto n) { return n >= 1 && n <= X; });
    if (!(double(n1) <= 1.62 * pow_alpha0(double(X)))) {
      FAIL("counting bound fails at X=" << X);
    }
  }
}
