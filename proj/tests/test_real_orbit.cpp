#include <doctest.h>

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ternary/continued_fraction.hpp"
#include "ternary/error.hpp"
#include "ternary/three_gap.hpp"

using namespace ternary;

namespace {

bool has_convergent(const CFExpansion& cf, long p, long q) {
  for (long i = 0; i <= cf.last_index(); ++i) {
    if (cf.p(i) == p && cf.q(i) == q) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("continued fraction of log_3 2") {
  auto cf5 = cf_log3_2(5);
  CHECK(cf5.size() == 6);
  CHECK(has_convergent(cf5, 12, 19));
  CHECK(531441 > 524288);
  CHECK(oracle::above_log3_2(12, 19));

  auto cf7 = cf_log3_2(7);
  CHECK(has_convergent(cf7, 41, 65));
  CHECK_FALSE(oracle::above_log3_2(41, 65));

  auto exact = oracle::log3_2_quotients(15);
  auto cf = cf_log3_2(40);
  REQUIRE(cf.size() == 41);
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(cf.quotients()[i] == exact[i]);

  for (long i = -1; i < cf.last_index(); ++i) {
    mpz_class det = cf.p(i) * cf.q(i + 1) - cf.p(i + 1) * cf.q(i);
    CHECK(abs(det) == 1);
  }
  for (long i = 1; i <= cf.last_index(); ++i) CHECK(cf.q(i) == cf.a(i) * cf.q(i - 1) + cf.q(i - 2));
}

TEST_CASE("continued fraction certification honours the precision cap") {
  CHECK_THROWS_AS(cf_log3_2(400, 256), InsufficientPrecision);
  CHECK_THROWS_AS(cf_log3_2(0), InvalidArgument);
  auto deep = cf_log3_2(120);
  CHECK(deep.size() == 121);
  CHECK(deep.certified_bits() >= 256);
}

TEST_CASE("property: convergents alternate and approximate within 1/q^2") {
  auto cf = cf_log3_2(40);
  auto rows = verify_convergents(cf);
  REQUIRE(rows.size() == cf.size());
  for (const auto& r : rows) {
    CHECK(r.alternates);
    CHECK(r.approximation_ok);
    CHECK(r.side == (r.index % 2 == 0 ? -1 : 1));
  }
  CHECK(rows[5].exact);
}

TEST_CASE("denominator growth bound") {
  auto cf = cf_log3_2(40);
  auto rows = check_denominator_growth(cf);
  REQUIRE(rows.size() == 40);
  for (const auto& r : rows) CHECK_MESSAGE(r.ok, "index " << r.index);

  // A single huge quotient breaks the bound.
  std::vector<mpz_class> q{0, 1, 1, 1, 2};
  mpz_class huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 10, 60);
  q.push_back(huge);
  auto bad = check_denominator_growth(CFExpansion::from_quotients(q, false));
  CHECK(bad.front().ok);
  CHECK_FALSE(bad.back().ok);
}

TEST_CASE("three gaps for small N") {
  auto theta = RotationAngle::log3_2();
  auto one = three_gap(theta, 1);
  CHECK(one.distinct() == 2);
  CHECK(one.multiplicities[0] + one.multiplicities[1] + one.multiplicities[2] == 2);
  const double a0 = std::log(2.0) / std::log(3.0);
  std::vector<double> got;
  for (std::size_t i = 0; i < 3; ++i) {
    if (one.multiplicities[i]) got.push_back(one.length(i));
  }
  std::sort(got.begin(), got.end());
  CHECK(got[0] == doctest::Approx(1 - a0).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(a0).epsilon(1e-12));

  auto three = three_gap(theta, 3);
  CHECK(three.distinct() == 3);
  CHECK(three.length(0) == doctest::Approx(0.2619).epsilon(1e-3));
  CHECK(three.length(1) == doctest::Approx(0.1072).epsilon(1e-3));
  CHECK(three.length(2) == doctest::Approx(0.3691).epsilon(1e-3));
  CHECK(three.lengths[2] == three.lengths[0] + three.lengths[1]);

  // Direct arcs in double precision.
  std::vector<double> pts;
  for (int j = 0; j <= 3; ++j) pts.push_back(std::fmod(j * a0, 1.0));
  std::sort(pts.begin(), pts.end());
  std::vector<double> arcs{pts[1] - pts[0], pts[2] - pts[1], pts[3] - pts[2], 1 - pts[3] + pts[0]};
  std::sort(arcs.begin(), arcs.end());
  CHECK(arcs[0] == doctest::Approx(0.1072).epsilon(1e-3));
  CHECK(arcs[3] == doctest::Approx(0.3691).epsilon(1e-3));
}

TEST_CASE("property: formula matches brute force for N <= 2000") {
  auto theta = RotationAngle::log3_2();
  const mpz_class offsets[] = {0, fixed_offset("0.3", theta.bits())};
  for (const auto& x : offsets) {
    for (std::uint64_t N = 1; N <= 2000; ++N) {
      auto f = three_gap(theta, N);
      auto b = three_gap_bruteforce(theta, x, N);
      std::uint64_t total = 0;
      for (auto m : f.multiplicities) total += m;
      REQUIRE(total == N + 1);
      REQUIRE(f.distinct() <= 3);
      if (f.multiplicities[2] > 0) REQUIRE(f.lengths[2] == f.lengths[0] + f.lengths[1]);
      if (!same_spectrum(f, b)) FAIL("spectrum mismatch at N=" << N);
    }
  }
}

TEST_CASE("two lengths at N = q_{n+1} - 1") {
  auto theta = RotationAngle::log3_2();
  for (long n = 1; n + 1 <= 20; ++n) {
    auto c = check_two_lengths(theta, n);
    CHECK(c.two_lengths);
    CHECK(c.ordered);
  }
}

TEST_CASE("rotation angle guards") {
  auto rational = CFExpansion::from_quotients({0, 1, 1, 2}, true);
  CHECK_THROWS_AS(RotationAngle::from_cf(rational, 256), InvalidArgument);
  auto theta = RotationAngle::log3_2(10);
  CHECK_THROWS_AS(three_gap(theta, 100000000), InsufficientPrecision);
  CHECK_THROWS_AS(fixed_offset("0.x", 256), ParseError);
  // Low precision makes points collide.
  auto coarse = RotationAngle::from_cf(cf_log3_2(10), 8);
  CHECK_THROWS_AS(three_gap_bruteforce(coarse, 0, 2000), InsufficientPrecision);
  // Generic irrational from its quotients.
  auto golden = RotationAngle::from_cf(CFExpansion::from_quotients(std::vector<mpz_class>(80, 1), false), 128);
  for (std::uint64_t N : {1u, 5u, 77u, 400u}) CHECK(same_spectrum(three_gap(golden, N), three_gap_bruteforce(golden, 0, N)));
}
