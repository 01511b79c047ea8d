#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ternary {

using Digit = std::uint8_t;

/// Natural number held as canonical base-3 digits, least significant first.
///
/// Zero is the empty digit vector. All mutating helpers return new values;
/// a constructed TernaryNat never changes.
class TernaryNat {
 public:
  TernaryNat() = default;
  explicit TernaryNat(std::uint64_t value);

  /// Takes digits least-significant first; strips high zeros.
  /// Throws InvalidArgument on any digit outside {0,1,2}.
  static TernaryNat from_digits(std::vector<Digit> lsd_first);

  /// Parses a most-significant-first string over {0,1,2}, e.g. "100111".
  static TernaryNat parse(std::string_view msd_first);

  static TernaryNat from_mpz(const mpz_class& value);
  static TernaryNat from_decimal(std::string_view decimal);

  std::span<const Digit> digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool is_zero() const noexcept { return digits_.empty(); }
  bool is_even() const noexcept;

  /// Digit at position i; zero past the most significant digit.
  Digit digit(std::size_t i) const noexcept { return i < digits_.size() ? digits_[i] : 0; }

  /// Most-significant-first digit string; "0" for zero.
  std::string to_string() const;
  std::string to_decimal() const;
  mpz_class to_mpz() const;

  /// Value mod 3^k as a TernaryNat (the k low digits).
  TernaryNat low_digits(std::size_t k) const;

  /// Multiplies by 3^k.
  TernaryNat shifted(std::size_t k) const;

  friend bool operator==(const TernaryNat&, const TernaryNat&) = default;
  friend std::strong_ordering operator<=>(const TernaryNat& a, const TernaryNat& b);

  friend TernaryNat operator+(const TernaryNat& a, const TernaryNat& b);
  /// Throws InvalidArgument when b > a.
  friend TernaryNat operator-(const TernaryNat& a, const TernaryNat& b);

 private:
  explicit TernaryNat(std::vector<Digit> canonical) : digits_(std::move(canonical)) {}
  void trim() noexcept;

  std::vector<Digit> digits_;
};

/// Positive rational numerator / 2^exponent, reduced so the numerator is odd
/// unless the exponent is zero.
class DyadicRational {
 public:
  DyadicRational() : numerator_(1) {}
  DyadicRational(TernaryNat numerator, std::uint64_t exponent);

  /// Accepts "A", "A/2^s" or "A/D" with D a power of two; A decimal.
  static DyadicRational parse(std::string_view text);

  const TernaryNat& numerator() const noexcept { return numerator_; }
  std::uint64_t exponent() const noexcept { return exponent_; }
  bool is_positive() const noexcept { return !numerator_.is_zero(); }

  /// "A/2^s", or "A" when s = 0.
  std::string to_string() const;

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;

 private:
  TernaryNat numerator_;
  std::uint64_t exponent_ = 0;
};

/// 2^n by n successive doublings.
TernaryNat pow2(std::uint64_t n);

TernaryNat times_two(const TernaryNat& x);
TernaryNat mul_small(const TernaryNat& x, std::uint64_t m);

/// Quotient and remainder of x / m, m >= 1.
std::pair<TernaryNat, std::uint64_t> div_small(const TernaryNat& x, std::uint64_t m);

/// True iff no digit of x equals d. Zero omits every digit.
bool omits_digit(const TernaryNat& x, Digit d);

/// floor(lambda * 2^n), exact.
TernaryNat floor_lambda_pow2(const DyadicRational& lambda, std::uint64_t n);

/// The k most significant digits, most significant first.
/// Throws InsufficientLength when x has fewer than k digits.
std::string leading_digits(const TernaryNat& x, std::size_t k);

/// Number of digits (0 for zero), i.e. the smallest t with x < 3^t.
inline std::size_t digit_count(const TernaryNat& x) { return x.size(); }

TernaryNat pow3(std::size_t k);

}  // namespace ternary
