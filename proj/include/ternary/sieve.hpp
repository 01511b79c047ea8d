#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ternary/core.hpp"

namespace ternary {

/// A 3-adic integer known modulo 3^precision.
class PadicApprox {
 public:
  PadicApprox(const TernaryNat& value, std::size_t precision);

  /// Most-significant-first digit string; its length is the precision.
  static PadicApprox parse(std::string_view msd_first);

  std::size_t precision() const noexcept { return digits_.size(); }
  Digit digit(std::size_t i) const { return digits_.at(i); }
  const std::vector<Digit>& digits() const noexcept { return digits_; }

  /// Index of the lowest nonzero digit, or precision() when all digits vanish.
  std::size_t valuation() const noexcept;

  std::string to_string() const;

 private:
  std::vector<Digit> digits_;
};

/// Order of 2 modulo 3^k, i.e. 2 * 3^(k-1).
std::uint64_t residue_modulus(unsigned k);

/// Residues t mod 2*3^(k-1) for which the k low ternary digits of 2^t lie in {0,1}.
std::vector<std::uint64_t> residue_survivors(unsigned k);

/// Same filter for A * 2^t, A an arbitrary natural (only A mod 3^k matters).
std::vector<std::uint64_t> residue_survivors(unsigned k, const TernaryNat& multiplier);

struct SieveOptions {
  std::uint64_t max_exponent = 0;
  unsigned residue_depth = 12;
  DyadicRational lambda;
  unsigned threads = 1;
};

struct SieveReport {
  std::uint64_t bound = 0;
  DyadicRational lambda;
  unsigned residue_depth = 0;
  std::vector<std::uint64_t> survivors;
  /// counts_per_k[k-1]: exponents in [0, bound] left after the depth-k residue filter.
  std::vector<std::uint64_t> counts_per_k;
  /// Limb operations performed; deterministic for fixed inputs.
  std::uint64_t work_units = 0;
  /// N(X) counts 1 <= n <= X.
  std::uint64_t count_n_ge_1 = 0;
  /// N_1(X) <= 1.62 X^(log_3 2); only defined for lambda = 1.
  std::optional<bool> narkiewicz_ok;
};

/// Exponents n <= X with floor(lambda 2^n) free of the digit 2.
SieveReport run_sieve(const SieveOptions& options);

/// Exponents n <= X with (2^n)_3 free of the digit 2.
std::vector<std::uint64_t> enumerate_digit2free_powers(std::uint64_t max_exponent, unsigned threads = 1);

struct TildeCount {
  std::uint64_t bound = 0;
  /// Number of low-order digits tested (2*3^(k-2) < X <= 2*3^(k-1)).
  unsigned digits_tested = 0;
  /// 3-adic valuation stripped from lambda before testing.
  std::size_t valuation = 0;
  std::uint64_t count = 0;
  double count_bound = 0.0;  // 2 X^(log_3 2)
  bool within_bound = false;
  /// The count only refutes membership; digits beyond the tested prefix are unknown.
  static constexpr const char* kSurrogateNote =
      "prefix surrogate: n counted when the low digits_tested digits of lambda*2^n omit 2";
};

/// Low-order-digit count of n in [1, X] for which lambda 2^n may avoid the digit 2.
/// Throws InsufficientPrecision when lambda is not known to ceil(log_3 X) + 2
/// digits, or when it vanishes to the available precision.
TildeCount count_tilde_N(const PadicApprox& lambda, std::uint64_t max_exponent);

/// #{1 <= n <= X : floor(lambda 2^n) omits the digit 2}, exact.
std::uint64_t count_N(const DyadicRational& lambda, std::uint64_t max_exponent);

/// X^(log_3 2).
double pow_alpha0(double x);

namespace detail {

/// Natural number in base 3^19 limbs (least significant first); the sieve's
/// working representation. Multiplying by 2^e, e <= 31, never overflows 64 bits.
class PackedTernary {
 public:
  static constexpr std::uint32_t kLimbBase = 1162261467u;  // 3^19
  static constexpr unsigned kLimbDigits = 19;

  explicit PackedTernary(const TernaryNat& value);

  /// Multiplies by 2^e; returns the number of limbs touched.
  std::uint64_t mul_pow2(unsigned e);

  /// Position of the lowest digit equal to 2, or -1 if none.
  long long first_two() const;

  TernaryNat to_ternary_nat() const;
  std::size_t limbs() const noexcept { return limbs_.size(); }

 private:
  std::vector<std::uint32_t> limbs_;
};

}  // namespace detail

}  // namespace ternary
