#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ternary/continued_fraction.hpp"
#include "ternary/core.hpp"
#include "ternary/interval.hpp"

namespace ternary {

/// Sub-interval of [0,1) holding frac(log_3 y) for every y whose leading
/// ternary digits are `digits`: [log_3 beta, log_3(beta + 3^(1-k))) with
/// beta = b_0.b_1...b_{k-1} in base 3.
struct LeadingInterval {
  std::string digits;  // most significant first
  Interval left;       // encloses the left endpoint
  Interval right;      // encloses the right endpoint

  LeadingInterval(std::string d, Interval l, Interval r)
      : digits(std::move(d)), left(std::move(l)), right(std::move(r)) {}

  std::size_t k() const noexcept { return digits.size(); }
  /// Enclosure of the width.
  Interval width() const { return right - left; }
};

/// Throws ParseError on characters outside {0,1,2} and InvalidArgument when
/// the first digit is 0.
LeadingInterval leading_interval(const std::string& digits, mpfr_prec_t bits = 256);

/// All 2*3^(k-1) intervals of length-k digit strings, in increasing order.
std::vector<LeadingInterval> leading_partition(unsigned k, mpfr_prec_t bits = 256);

/// log_3(lambda 2^n) as an enclosure.
Interval log3_lambda_pow2(const DyadicRational& lambda, std::uint64_t n, mpfr_prec_t bits);

struct LeadingClassification {
  std::string exact;      // from the integer floor(lambda 2^n)
  std::string located;    // from frac(log_3(lambda 2^n)); empty on boundary
  bool boundary = false;  // could not be separated from an interval endpoint
  bool agree = false;
  /// lambda 2^n = b * 3^m exactly, so w is the left end of J(b).
  bool on_endpoint = false;
  mpfr_prec_t bits = 0;   // precision that settled the location
};

/// Leading k digits of floor(lambda 2^n) two ways: exactly, and by locating
/// frac(log_3(lambda 2^n)) among the leading intervals. Requires at least k
/// integer digits, lambda 2^n >= 3^(k-1) (InvalidArgument otherwise).
LeadingClassification classify_leading(const DyadicRational& lambda, std::uint64_t n, unsigned k,
                                       mpfr_prec_t precision_cap = kDefaultPrecisionCap);

struct CensusReport {
  DyadicRational lambda;
  std::uint64_t bound = 0;  // X
  long l = 0;               // q_{l-1} < X <= q_l
  mpz_class q_prev;         // q_{l-1}
  unsigned k = 0;           // max(1, ceil(log_3 q_{l-1}))
  std::uint64_t block_length = 0;
  /// n in [1, X] whose first k digits omit 2 (all digits when fewer than k).
  std::uint64_t count = 0;
  std::uint64_t exact_count = 0;  // N_lambda(X)
  std::vector<std::uint64_t> per_block;
  std::uint64_t max_per_block = 0;
  std::uint64_t block_bound = 0;  // 6 * 2^(k-1)
  bool blocks_ok = false;
  std::uint64_t digit2free_prefixes = 0;  // length-k strings, b_0 != 0, omitting 2
  double prefix_count_bound = 0.0;        // 6 * 2^(k-1) * (X / (q_{l-1}-1) + 1)
  double power_bound = 0.0;               // 25 X^0.9725
  bool within_power_bound = false;
  bool within_prefix_count_bound = false;
};

CensusReport leading_digit_census(const DyadicRational& lambda, std::uint64_t X,
                                  mpfr_prec_t precision_cap = kDefaultPrecisionCap);

}  // namespace ternary
