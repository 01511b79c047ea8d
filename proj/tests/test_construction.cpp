#include <doctest.h>

#include <mpfr.h>

#include "ternary/construction.hpp"
#include "ternary/error.hpp"

using namespace ternary;

namespace {

// frac(l log_3 2) < 2^-T with plain MPFR at 1024 bits.
bool frac_below(const mpz_class& l, long T) {
  mpfr_t a, b, f;
  mpfr_inits2(1024, a, b, f, (mpfr_ptr)0);
  mpfr_set_ui(a, 2, MPFR_RNDN);
  mpfr_log(a, a, MPFR_RNDN);
  mpfr_set_ui(b, 3, MPFR_RNDN);
  mpfr_log(b, b, MPFR_RNDN);
  mpfr_div(a, a, b, MPFR_RNDN);
  mpfr_mul_z(a, a, l.get_mpz_t(), MPFR_RNDN);
  mpfr_frac(f, a, MPFR_RNDN);
  mpfr_mul_2si(f, f, T, MPFR_RNDN);
  bool below = mpfr_cmp_ui(f, 1) < 0 && mpfr_sgn(f) > 0;
  mpfr_clears(a, b, f, (mpfr_ptr)0);
  return below;
}

}  // namespace

TEST_CASE("first level search") {
  auto r = find_lk(0, 1);
  CHECK(r.l == 65);
  CHECK(r.r == 41);
  CHECK(r.exhaustive);
  CHECK(r.threshold_exponent == 6);
  CHECK(r.growth_bound_ok);
  CHECK(r.zeros_needed == 3);
  REQUIRE(r.leading_zeros.has_value());
  CHECK(*r.leading_zeros >= 3);
  CHECK(*r.leading_ok);

  int first = 0;
  for (long l = 2; l <= 65 && !first; ++l) {
    if (frac_below(l, 6)) first = static_cast<int>(l);
  }
  CHECK(first == 65);
  mpz_class two65 = 1;
  two65 <<= 65;
  CHECK(two65.get_str(3).substr(0, 4) == "1000");
}

TEST_CASE("second level search") {
  auto r = find_lk(65, 2);
  CHECK(r.threshold_exponent == 73);
  CHECK(frac_below(r.l, 73));
  CHECK(r.l > mpz_class("100000000000000000000"));
  CHECK_FALSE(r.exhaustive);
  CHECK(r.scanned_below == 100000);
  CHECK(r.growth_bound_ok);
  CHECK_FALSE(r.leading_zeros.has_value());
}

TEST_CASE("digit-{0,2} rank and unrank") {
  std::vector<long> direct;
  for (long x = 0; x < 6561; ++x) {
    if (mpz_class(x).get_str(3).find('1') == std::string::npos) direct.push_back(x);
  }
  for (std::size_t j = 0; j < direct.size(); ++j) CHECK(digit02_unrank(j) == direct[j]);
  long count = 0;
  std::size_t next = 0;
  for (long x = -1; x < 6561; ++x) {
    while (next < direct.size() && direct[next] <= x) {
      ++count;
      ++next;
    }
    if (digit02_rank(x) != count) FAIL("rank mismatch at " << x);
  }
}

TEST_CASE("level-one construction") {
  for (const char* text : {"min", "max", "random:7"}) {
    auto rep = construct_cantor_lambda(1, DigitPolicy::parse(text));
    REQUIRE(rep.levels_built == 1);
    const auto& lv = rep.levels[0];
    CHECK_MESSAGE(rep.all_ok(), text);
    CHECK(lv.p1);
    CHECK(lv.p2);
    CHECK(lv.floor_ok);
    CHECK(lv.even);
    CHECK(lv.half_digit2free);
    CHECK(lv.carry_ok);
    CHECK(lv.s_matches_floor);
    CHECK(lv.claimed == (mpz_class(1) << 41) - (mpz_class(1) << 40));
    CHECK(lv.admissible >= lv.claimed);
    CHECK(lv.M.get_str(3).find('1') == std::string::npos);
    mpz_class half = lv.M / 2;
    CHECK(half.get_str(3).find('2') == std::string::npos);
    CHECK(rep.lambda_range_ok);
    CHECK(rep.product_ok);
    CHECK(rep.infeasible_reason.empty());
  }
  auto a = construct_cantor_lambda(1, DigitPolicy::parse("random:7"));
  auto b = construct_cantor_lambda(1, DigitPolicy::parse("random:7"));
  auto c = construct_cantor_lambda(1, DigitPolicy::parse("random:8"));
  CHECK(a.levels[0].d == b.levels[0].d);
  CHECK(a.levels[0].d != c.levels[0].d);
  auto lo = construct_cantor_lambda(1, DigitPolicy::parse("min"));
  auto hi = construct_cantor_lambda(1, DigitPolicy::parse("max"));
  CHECK(lo.levels[0].d < a.levels[0].d);
  CHECK(a.levels[0].d < hi.levels[0].d);
}

TEST_CASE("explicit digits are checked") {
  DigitPolicy zero;
  zero.fixed = {0};
  auto rep = construct_cantor_lambda(1, zero);
  mpz_class M = 1;
  M <<= 66;  // 2 * 2^65
  CHECK(rep.levels[0].M == M);
  const bool has_one = M.get_str(3).find('1') != std::string::npos;
  CHECK(rep.levels[0].p2 == !has_one);
  CHECK(has_one);
  CHECK(rep.levels[0].violation.find("(P2)") == 0);
  CHECK_FALSE(rep.all_ok());

  DigitPolicy big;
  big.fixed = {rep.levels[0].digit_bound + 1};
  auto bad = construct_cantor_lambda(1, big);
  CHECK_FALSE(bad.levels[0].p1);
  CHECK(bad.levels[0].violation.find("(P1)") == 0);
}

TEST_CASE("level caps") {
  auto rep = construct_cantor_lambda(2, DigitPolicy::parse("min"));
  CHECK(rep.levels_built == 1);
  CHECK_FALSE(rep.infeasible_reason.empty());
  REQUIRE(rep.unbuilt.size() == 1);
  CHECK(rep.unbuilt[0].k == 2);
  CHECK(rep.all_ok());
  CHECK_THROWS_AS(construct_cantor_lambda(3, DigitPolicy::parse("min")), Infeasible);
  CHECK_THROWS_AS(DigitPolicy::parse("random:"), ParseError);
  CHECK_THROWS_AS(DigitPolicy::parse("greedy"), ParseError);
}
