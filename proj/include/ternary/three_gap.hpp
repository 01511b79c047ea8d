#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ternary/continued_fraction.hpp"

namespace ternary {

/// Rotation number held as a fixed-point integer theta * 2^bits, together
/// with the continued fraction that drives the gap formulas.
class RotationAngle {
 public:
  /// log_3 2 with `depth` certified quotients.
  static RotationAngle log3_2(std::size_t depth = 40, unsigned bits = 256,
                              mpfr_prec_t precision_cap = kDefaultPrecisionCap);

  /// Value taken from the deepest convergent of `cf`. Rejects terminating
  /// (rational) expansions.
  static RotationAngle from_cf(const CFExpansion& cf, unsigned bits = 256);

  const CFExpansion& cf() const noexcept { return cf_; }
  const mpz_class& fixed() const noexcept { return fixed_; }
  unsigned bits() const noexcept { return bits_; }

  /// Largest convergent index whose quotients agree between `cf` and the
  /// fixed-point value itself. Gap formulas are valid up to this index.
  long valid_index() const noexcept { return valid_index_; }

 private:
  RotationAngle(CFExpansion cf, mpz_class fixed, unsigned bits);

  CFExpansion cf_;
  mpz_class fixed_;
  unsigned bits_;
  long valid_index_ = -1;
};

/// Parses a decimal offset such as "0.3" into floor(x * 2^bits) mod 2^bits.
mpz_class fixed_offset(const std::string& decimal, unsigned bits);

/// Arc lengths of the points x + j theta (mod 1), j = 0..N.
/// Lengths are fixed-point integers at scale 2^bits.
struct GapSpectrum {
  std::uint64_t N = 0;
  unsigned bits = 0;
  /// Convergent index and the decomposition N = (j+1) q_n + q_{n-1} + k.
  /// Unset (-1) for brute-force spectra.
  long n = -1;
  long long j = -1;
  long long k = -1;
  std::vector<mpz_class> lengths;
  std::vector<std::uint64_t> multiplicities;

  double length(std::size_t i) const;
  /// Distinct lengths with non-zero multiplicity.
  std::size_t distinct() const;
};

/// Closed-form spectrum. The offset only translates the points, so it does
/// not enter. Throws InsufficientPrecision when N needs convergents beyond
/// the angle's valid index.
GapSpectrum three_gap(const RotationAngle& theta, std::uint64_t N);

/// Sorts the N+1 points and measures the arcs. Lengths are sorted ascending.
/// Throws InsufficientPrecision when two points coincide at this precision.
GapSpectrum three_gap_bruteforce(const RotationAngle& theta, const mpz_class& offset, std::uint64_t N);

/// Same multiset of (length, multiplicity) up to `ulps` units of 2^-bits.
bool same_spectrum(const GapSpectrum& a, const GapSpectrum& b, unsigned ulps = 3);

struct TwoLengthCheck {
  long n = 0;
  std::uint64_t N = 0;  // q_{n+1} - 1
  mpz_class long_length, short_length;
  bool two_lengths = false;
  bool ordered = false;  // short < long < 2 short
};

/// For N = q_{n+1} - 1 there are exactly two lengths, short < long < 2 short.
TwoLengthCheck check_two_lengths(const RotationAngle& theta, long n);

}  // namespace ternary
