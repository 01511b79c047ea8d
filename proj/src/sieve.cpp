#include "ternary/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <thread>

#include "ternary/error.hpp"

namespace ternary {

namespace {

constexpr unsigned kMaxResidueDepth = 16;

std::uint64_t pow3_u64(unsigned k) {
  std::uint64_t p = 1;
  for (unsigned i = 0; i < k; ++i) p *= 3;
  return p;
}

std::uint64_t mod_pow3(const TernaryNat& x, unsigned k) {
  std::uint64_t v = 0;
  for (unsigned i = k; i-- > 0;) v = v * 3 + x.digit(i);
  return v;
}

// Number of low digits of v (taken mod 3^k) before the first 2, capped at k.
unsigned clean_depth(std::uint64_t v, unsigned k) {
  for (unsigned i = 0; i < k; ++i) {
    if (v % 3 == 2) return i;
    v /= 3;
  }
  return k;
}

// depth[t] = clean_depth(A 2^t mod 3^k) for t in [0, 2*3^(k-1)).
std::vector<std::uint8_t> depth_table(const TernaryNat& multiplier, unsigned k) {
  const std::uint64_t mod = pow3_u64(k);
  const std::uint64_t ord = residue_modulus(k);
  std::vector<std::uint8_t> depth(ord);
  std::uint64_t v = mod_pow3(multiplier, k);
  for (std::uint64_t t = 0; t < ord; ++t) {
    depth[t] = static_cast<std::uint8_t>(clean_depth(v, k));
    v = (2 * v) % mod;
  }
  return depth;
}

struct BlockResult {
  std::vector<std::uint64_t> survivors;
  std::uint64_t work = 0;
};

// Checks candidate exponents t (offsets from the dyadic shift) in ascending
// order, advancing A*2^t by multiplications with 2^31 or less.
BlockResult scan_block(const TernaryNat& numerator, std::span<const std::uint64_t> offsets) {
  BlockResult out;
  if (offsets.empty()) return out;
  detail::PackedTernary value(numerator);
  std::uint64_t at = 0;
  for (std::uint64_t t : offsets) {
    while (at < t) {
      unsigned step = static_cast<unsigned>(std::min<std::uint64_t>(t - at, 31));
      out.work += value.mul_pow2(step);
      at += step;
    }
    out.work += 1;
    if (value.first_two() < 0) out.survivors.push_back(t);
  }
  return out;
}

}  // namespace

// --- PackedTernary -------------------------------------------------------

namespace detail {

PackedTernary::PackedTernary(const TernaryNat& value) {
  auto digits = value.digits();
  for (std::size_t base = 0; base < digits.size(); base += kLimbDigits) {
    std::uint32_t limb = 0;
    std::size_t top = std::min(digits.size(), base + kLimbDigits);
    for (std::size_t i = top; i-- > base;) limb = limb * 3 + digits[i];
    limbs_.push_back(limb);
  }
}

std::uint64_t PackedTernary::mul_pow2(unsigned e) {
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    std::uint64_t t = (static_cast<std::uint64_t>(limb) << e) + carry;
    limb = static_cast<std::uint32_t>(t % kLimbBase);
    carry = t / kLimbBase;
  }
  while (carry != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(carry % kLimbBase));
    carry /= kLimbBase;
  }
  return limbs_.size();
}

long long PackedTernary::first_two() const {
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint32_t limb = limbs_[i];
    for (unsigned j = 0; j < kLimbDigits && limb != 0; ++j) {
      if (limb % 3 == 2) return static_cast<long long>(i * kLimbDigits + j);
      limb /= 3;
    }
  }
  return -1;
}

TernaryNat PackedTernary::to_ternary_nat() const {
  std::vector<Digit> digits;
  digits.reserve(limbs_.size() * kLimbDigits);
  for (std::uint32_t limb : limbs_) {
    for (unsigned j = 0; j < kLimbDigits; ++j) {
      digits.push_back(static_cast<Digit>(limb % 3));
      limb /= 3;
    }
  }
  return TernaryNat::from_digits(std::move(digits));
}

}  // namespace detail

// --- PadicApprox ---------------------------------------------------------

PadicApprox::PadicApprox(const TernaryNat& value, std::size_t precision) : digits_(precision) {
  for (std::size_t i = 0; i < precision; ++i) digits_[i] = value.digit(i);
}

PadicApprox PadicApprox::parse(std::string_view msd_first) {
  auto v = TernaryNat::parse(msd_first);
  return PadicApprox(v, msd_first.size());
}

std::size_t PadicApprox::valuation() const noexcept {
  std::size_t v = 0;
  while (v < digits_.size() && digits_[v] == 0) ++v;
  return v;
}

std::string PadicApprox::to_string() const {
  std::string out;
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) out.push_back(static_cast<char>('0' + *it));
  return out;
}

// --- residue sieve -------------------------------------------------------

std::uint64_t residue_modulus(unsigned k) {
  if (k == 0 || k > 39) throw InvalidArgument("orbit-sieve", "residue depth must be in [1, 39]");
  return 2 * pow3_u64(k - 1);
}

std::vector<std::uint64_t> residue_survivors(unsigned k) { return residue_survivors(k, TernaryNat(1)); }

std::vector<std::uint64_t> residue_survivors(unsigned k, const TernaryNat& multiplier) {
  if (k == 0 || k > 20) throw InvalidArgument("orbit-sieve", "residue depth must be in [1, 20]");
  const std::uint64_t mod = pow3_u64(k);
  const std::uint64_t ord = residue_modulus(k);
  std::vector<std::uint64_t> out;
  std::uint64_t v = mod_pow3(multiplier, k);
  for (std::uint64_t t = 0; t < ord; ++t) {
    if (clean_depth(v, k) == k) out.push_back(t);
    v = (2 * v) % mod;
  }
  return out;
}

double pow_alpha0(double x) { return std::pow(x, std::log(2.0) / std::log(3.0)); }

SieveReport run_sieve(const SieveOptions& options) {
  if (options.max_exponent < 1) throw InvalidArgument("orbit-sieve", "max exponent must be >= 1");
  if (options.residue_depth < 1 || options.residue_depth > kMaxResidueDepth) {
    throw InvalidArgument("orbit-sieve", "residue depth must be in [1, 16]");
  }
  if (!options.lambda.is_positive()) throw InvalidArgument("orbit-sieve", "lambda must be positive");

  const std::uint64_t X = options.max_exponent;
  const unsigned K = options.residue_depth;
  const std::uint64_t s = options.lambda.exponent();
  const TernaryNat& numerator = options.lambda.numerator();

  SieveReport report;
  report.bound = X;
  report.lambda = options.lambda;
  report.residue_depth = K;
  report.counts_per_k.assign(K, 0);

  // Exponents below the dyadic shift are pure divisions; check them directly.
  const std::uint64_t direct_end = std::min<std::uint64_t>(s, X + 1);
  for (std::uint64_t n = 0; n < direct_end; ++n) {
    for (auto& c : report.counts_per_k) ++c;
    if (omits_digit(floor_lambda_pow2(options.lambda, n), 2)) report.survivors.push_back(n);
  }

  // For n >= s, floor(lambda 2^n) = A 2^(n-s); filter on t = n - s.
  std::vector<std::uint64_t> candidates;
  if (X >= s) {
    const auto depth = depth_table(numerator, K);
    const std::uint64_t ord = depth.size();
    for (std::uint64_t t = 0; t <= X - s; ++t) {
      unsigned d = depth[t % ord];
      for (unsigned k = 1; k <= d; ++k) ++report.counts_per_k[k - 1];
      if (d == K) candidates.push_back(t);
    }
  }

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, 64));
  std::vector<BlockResult> blocks(threads);
  {
    // Contiguous slices of the candidate list; each slice builds its own start value.
    std::vector<std::span<const std::uint64_t>> slices;
    std::size_t per = (candidates.size() + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
      std::size_t lo = std::min(candidates.size(), i * per);
      std::size_t hi = std::min(candidates.size(), lo + per);
      slices.emplace_back(candidates.data() + lo, hi - lo);
    }
    if (threads == 1) {
      blocks[0] = scan_block(numerator, slices[0]);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back([&, i] { blocks[i] = scan_block(numerator, slices[i]); });
      }
    }
  }
  for (auto& b : blocks) {
    report.work_units += b.work;
    for (std::uint64_t t : b.survivors) report.survivors.push_back(t + s);
  }
  std::sort(report.survivors.begin(), report.survivors.end());

  report.count_n_ge_1 = static_cast<std::uint64_t>(
      std::count_if(report.survivors.begin(), report.survivors.end(), [](std::uint64_t n) { return n >= 1; }));
  if (options.lambda == DyadicRational{}) {
    report.narkiewicz_ok = static_cast<double>(report.count_n_ge_1) <= 1.62 * pow_alpha0(static_cast<double>(X));
  }
  return report;
}

std::vector<std::uint64_t> enumerate_digit2free_powers(std::uint64_t max_exponent, unsigned threads) {
  SieveOptions opts;
  opts.max_exponent = max_exponent;
  opts.threads = threads;
  return run_sieve(opts).survivors;
}

TildeCount count_tilde_N(const PadicApprox& lambda, std::uint64_t max_exponent) {
  if (max_exponent < 1) throw InvalidArgument("orbit-sieve", "X must be >= 1");
  TildeCount out;
  out.bound = max_exponent;

  // Smallest k with X <= 2*3^(k-1).
  unsigned k = 1;
  while (residue_modulus(k) < max_exponent) ++k;
  out.digits_tested = k;

  // ceil(log_3 X) + 2
  unsigned log3_ceil = 0;
  for (std::uint64_t p = 1; p < max_exponent; p *= 3) ++log3_ceil;
  const std::size_t need = log3_ceil + 2;
  if (lambda.precision() < need) {
    throw InsufficientPrecision("orbit-sieve", "lambda known to " + std::to_string(lambda.precision()) +
                                                   " digits, need " + std::to_string(need));
  }
  const std::size_t v = lambda.valuation();
  if (v == lambda.precision() || lambda.precision() - v < k) {
    throw InsufficientPrecision("orbit-sieve", "unit part of lambda known to fewer than " +
                                                   std::to_string(k) + " digits");
  }
  out.valuation = v;

  // Multiplying by 3^v shifts digits, so only the unit part matters.
  const std::uint64_t mod = pow3_u64(k);
  std::uint64_t unit = 0;
  for (std::size_t i = v + k; i-- > v;) unit = unit * 3 + lambda.digit(i);
  std::uint64_t y = unit % mod;
  for (std::uint64_t n = 1; n <= max_exponent; ++n) {
    y = (2 * y) % mod;
    if (clean_depth(y, k) == k) ++out.count;
  }
  out.count_bound = 2.0 * pow_alpha0(static_cast<double>(max_exponent));
  out.within_bound = static_cast<double>(out.count) <= out.count_bound;
  return out;
}

std::uint64_t count_N(const DyadicRational& lambda, std::uint64_t max_exponent) {
  if (!lambda.is_positive()) throw InvalidArgument("orbit-sieve", "lambda must be positive");
  std::uint64_t count = 0;
  const std::uint64_t s = lambda.exponent();
  for (std::uint64_t n = 1; n <= max_exponent && n < s; ++n) {
    if (omits_digit(floor_lambda_pow2(lambda, n), 2)) ++count;
  }
  if (max_exponent >= std::max<std::uint64_t>(s, 1)) {
    std::uint64_t n = std::max<std::uint64_t>(s, 1);
    TernaryNat x = floor_lambda_pow2(lambda, n);
    for (;; ++n) {
      if (omits_digit(x, 2)) ++count;
      if (n == max_exponent) break;
      x = times_two(x);
    }
  }
  return count;
}

}  // namespace ternary
