#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ternary/continued_fraction.hpp"
#include "ternary/core.hpp"

namespace ternary {

/// Result of the one-sided Diophantine search 0 < frac(l log_3 2) < 2^-T,
/// T = m_prev + 2k + 4, over l >= 2k.
struct LkResult {
  unsigned k = 0;
  std::uint64_t m_prev = 0;
  std::uint64_t threshold_exponent = 0;  // T
  mpz_class l;
  mpz_class r;                   // floor(l log_3 2)
  double frac_upper = 0.0;       // upper end of the enclosure of frac(l log_3 2)
  std::size_t cf_depth = 0;      // quotients used by the ladder walk
  /// Every l' in [2k, l) was checked and rejected.
  bool exhaustive = false;
  std::uint64_t scanned_below = 0;  // l' < scanned_below were checked
  /// l^13.3 >= 2^(m_prev + 2k - 7), decided exactly.
  bool growth_bound_ok = false;
  /// Zeros after the leading 1 of 2^l, when 2^l is small enough to expand.
  std::optional<std::uint64_t> leading_zeros;
  std::uint64_t zeros_needed = 0;  // ceil((m_prev + 2k + 2) log_3 2)
  std::optional<bool> leading_ok;
};

/// Smallest l >= 2k with 0 < frac(l log_3 2) < 2^-(m_prev + 2k + 4).
///
/// Candidates come from the ladder q_{2j} + t q_{2j+1}, 0 <= t <= a_{2j+2},
/// whose fractional parts decrease monotonically; the first rung below the
/// threshold is the answer. Smaller l are then rejected one by one up to
/// `scan_limit`. Throws InsufficientPrecision if a comparison cannot be
/// settled under `precision_cap` bits.
LkResult find_lk(std::uint64_t m_prev, unsigned k, std::uint64_t scan_limit = 100000,
                 mpfr_prec_t precision_cap = kDefaultPrecisionCap);

/// Numbers whose ternary digits are all 0 or 2, in increasing order: the
/// j-th is j written in binary with each 1 replaced by 2, read in base 3.
mpz_class digit02_unrank(const mpz_class& j);
/// How many such numbers lie in [0, x]; 0 for negative x.
mpz_class digit02_rank(const mpz_class& x);

struct DigitPolicy {
  enum class Kind { Min, Max, Random } kind = Kind::Min;
  std::uint64_t seed = 0;
  /// Explicit digits d_1, d_2, ... override the policy where present.
  std::vector<mpz_class> fixed;

  /// "min", "max" or "random:<seed>".
  static DigitPolicy parse(const std::string& text);
  std::string to_string() const;
};

struct LevelRecord {
  unsigned k = 0;
  LkResult lk;
  mpz_class m;  // m_k
  mpz_class s;  // r_1 + ... + r_k
  bool s_matches_floor = false;  // s_k == floor(m_k log_3 2)

  mpz_class d;
  mpz_class digit_bound;  // 3^r - 3^(r-k)
  mpz_class M;            // lambda_k 2^(m_k)
  mpz_class carry;        // M_{k-1} (2^l - 3^r)
  bool carry_ok = false;  // carry <= 3^(r-k)
  bool p1 = false;        // 0 <= d <= digit_bound
  bool p2 = false;        // (M)_3 omits 1
  bool floor_ok = false;  // floor(lambda_K 2^(m_k)) == M_k for the final lambda_K
  bool even = false;
  bool half_digit2free = false;  // (M/2)_3 omits 2
  mpz_class admissible;          // exact number of admissible d
  mpz_class claimed;             // 2^r - 2^(r-k)
  bool count_ok = false;         // admissible >= claimed
  std::string violation;         // first failed property, empty when admissible
};

struct ConstructionReport {
  unsigned levels_requested = 0;
  unsigned levels_built = 0;
  mpz_class d0;
  DigitPolicy policy;
  std::vector<LevelRecord> levels;
  DyadicRational lambda;      // lambda_K
  bool lambda_range_ok = false;  // d0 <= lambda_K and lambda_K + 2^-(m_K) <= d0 + 1
  /// prod_{i<=K} (2^(r_i) - 2^(r_i - i)) >= 2^(s_K) / 4, exact.
  bool product_ok = false;
  /// Searches for levels that could not be built.
  std::vector<LkResult> unbuilt;
  std::string infeasible_reason;  // set when a requested level could not be built

  bool all_ok() const;
};

/// Builds lambda_K = sum_{j<=K} d_j / 2^(m_j) with d_0 = 2. Throws Infeasible
/// for more than two levels. Level 2 is built only when M_2 fits within
/// `precision_cap` bits; otherwise its l_2 is still computed and the report
/// carries the reason.
ConstructionReport construct_cantor_lambda(unsigned levels, const DigitPolicy& policy,
                                           mpfr_prec_t precision_cap = kDefaultPrecisionCap,
                                           std::uint64_t scan_limit = 100000);

}  // namespace ternary
