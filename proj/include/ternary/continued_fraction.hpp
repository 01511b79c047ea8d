#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

namespace ternary {

inline constexpr mpfr_prec_t kDefaultPrecisionCap = mpfr_prec_t{1} << 16;

/// Continued fraction [a_0; a_1, a_2, ...] with its convergents p_i/q_i.
///
/// Convergents are indexed from -2 so the recurrences apply uniformly:
/// (p_-2, q_-2) = (0, 1), (p_-1, q_-1) = (1, 0).
class CFExpansion {
 public:
  /// `terminates` marks a finite expansion of a rational number.
  static CFExpansion from_quotients(std::vector<mpz_class> quotients, bool terminates);

  const std::vector<mpz_class>& quotients() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.size(); }
  bool terminates() const noexcept { return terminates_; }

  /// Last index i with a convergent available.
  long last_index() const noexcept { return static_cast<long>(a_.size()) - 1; }
  const mpz_class& a(long i) const { return a_.at(static_cast<std::size_t>(i)); }
  const mpz_class& p(long i) const { return p_.at(static_cast<std::size_t>(i + 2)); }
  const mpz_class& q(long i) const { return q_.at(static_cast<std::size_t>(i + 2)); }

  /// Bits of working precision that certified the quotients (0 for hand-built expansions).
  mpfr_prec_t certified_bits() const noexcept { return bits_; }

 private:
  std::vector<mpz_class> a_, p_, q_;
  bool terminates_ = false;
  mpfr_prec_t bits_ = 0;

  friend CFExpansion cf_log3_2(std::size_t depth, mpfr_prec_t precision_cap);
};

/// Quotients a_0..a_depth of log_3 2 and their convergents.
///
/// Quotients are read off a directed-rounding enclosure of log_3 2: only the
/// prefix shared by both endpoints (minus its last term) is kept, and the
/// working precision doubles until `depth` terms are certified. Throws
/// InsufficientPrecision past `precision_cap` bits.
CFExpansion cf_log3_2(std::size_t depth, mpfr_prec_t precision_cap = kDefaultPrecisionCap);

/// Continued fraction of a non-negative rational, at most `max_terms` terms.
std::vector<mpz_class> cf_of_rational(const mpq_class& x, std::size_t max_terms);

/// Sign of 3^p - 2^q, computed with exact integers.
int compare_pow3_pow2(unsigned long p, unsigned long q);

struct ConvergentCheck {
  long index = 0;
  /// +1 when p/q > log_3 2, -1 when below.
  int side = 0;
  /// True when the side was settled by an exact power comparison.
  bool exact = false;
  bool alternates = false;
  /// |log_3 2 - p/q| < 1/q^2
  bool approximation_ok = false;
};

/// Checks side alternation and the 1/q^2 approximation for each convergent.
/// Sides are compared exactly when q <= exact_limit, otherwise by interval.
std::vector<ConvergentCheck> verify_convergents(const CFExpansion& cf, unsigned long exact_limit = 100000);

struct GrowthRow {
  long index = 0;
  bool ok = false;
};

/// q_n <= 1200 q_{n-1}^13.3 for n = 1..last, decided as q_n^10 <= 1200^10 q_{n-1}^133.
std::vector<GrowthRow> check_denominator_growth(const CFExpansion& cf);

}  // namespace ternary
