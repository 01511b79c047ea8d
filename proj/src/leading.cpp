#include "ternary/leading.hpp"

#include <algorithm>
#include <cmath>

#include "ternary/error.hpp"

namespace ternary {

namespace {

// log_3(num / den) for num >= den > 0; exactly 0 when num == den.
Interval log3_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t bits) {
  Interval ratio = div_pos(Interval::exact(num, bits + 16), Interval::exact(den, bits + 16));
  Interval out(bits);
  mpfr_log(out.lo().get(), ratio.lo().get(), MPFR_RNDD);
  mpfr_log(out.hi().get(), ratio.hi().get(), MPFR_RNDU);
  return div_pos(out, Interval::ln(3, bits));
}

mpz_class parse_leading(const std::string& digits) {
  if (digits.empty()) throw ParseError("real-orbit", "empty digit string");
  mpz_class v = 0;
  for (char c : digits) {
    if (c < '0' || c > '2') throw ParseError("real-orbit", "digit string may only hold 0, 1, 2: '" + digits + "'");
    v = v * 3 + (c - '0');
  }
  if (digits[0] == '0') throw InvalidArgument("real-orbit", "leading digit must be non-zero: '" + digits + "'");
  return v;
}

}  // namespace

LeadingInterval leading_interval(const std::string& digits, mpfr_prec_t bits) {
  mpz_class b = parse_leading(digits);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 3, digits.size() - 1);
  return LeadingInterval(digits, log3_ratio(b, scale, bits), log3_ratio(b + 1, scale, bits));
}

std::vector<LeadingInterval> leading_partition(unsigned k, mpfr_prec_t bits) {
  if (k < 1) throw InvalidArgument("real-orbit", "k must be >= 1");
  std::vector<LeadingInterval> out;
  mpz_class lo, hi;
  mpz_ui_pow_ui(lo.get_mpz_t(), 3, k - 1);
  hi = 3 * lo;
  for (mpz_class b = lo; b < hi; ++b) out.push_back(leading_interval(b.get_str(3), bits));
  return out;
}

Interval log3_lambda_pow2(const DyadicRational& lambda, std::uint64_t n, mpfr_prec_t bits) {
  Interval ln_a = Interval::ln(lambda.numerator().to_mpz(), bits);
  Interval ln2(bits);
  mpfr_const_log2(ln2.lo().get(), MPFR_RNDD);
  mpfr_const_log2(ln2.hi().get(), MPFR_RNDU);
  const std::uint64_t s = lambda.exponent();
  Interval total = n >= s ? ln_a + ln2.scaled(mpz_class(static_cast<unsigned long>(n - s)))
                          : ln_a - ln2.scaled(mpz_class(static_cast<unsigned long>(s - n)));
  Interval ln3 = Interval::ln(3, bits);
  if (mpfr_sgn(total.lo().get()) < 0) throw InvalidArgument("real-orbit", "lambda 2^n must be >= 1");
  return div_pos(total, ln3);
}

LeadingClassification classify_leading(const DyadicRational& lambda, std::uint64_t n, unsigned k,
                                       mpfr_prec_t precision_cap) {
  if (k < 1) throw InvalidArgument("real-orbit", "k must be >= 1");
  TernaryNat x = floor_lambda_pow2(lambda, n);
  if (x.size() < k) throw InvalidArgument("real-orbit", "classification needs lambda 2^n >= 3^(k-1)");

  LeadingClassification out;
  out.exact = leading_digits(x, k);

  // w sits exactly on the left end of J(b) when lambda 2^n = b * 3^m.
  if (n >= lambda.exponent()) {
    const std::size_t m = x.size() - k;
    auto d = x.digits();
    if (std::all_of(d.begin(), d.begin() + static_cast<long>(m), [](Digit v) { return v == 0; })) {
      out.located = out.exact;
      out.on_endpoint = true;
      out.agree = true;
      return out;
    }
  }

  mpz_class low, high;
  mpz_ui_pow_ui(low.get_mpz_t(), 3, k - 1);
  high = 3 * low;
  for (mpfr_prec_t bits = 192; bits <= precision_cap; bits *= 2) {
    bool ok = false;
    Interval w = log3_lambda_pow2(lambda, n, bits).frac(ok);
    if (!ok) continue;
    // 3^(k-1+w) has integer part beta * 3^(k-1).
    Interval y = mul_nonneg(w + Interval::exact(static_cast<long>(k) - 1, bits), Interval::ln(3, bits));
    mpfr_exp(y.lo().get(), y.lo().get(), MPFR_RNDD);
    mpfr_exp(y.hi().get(), y.hi().get(), MPFR_RNDU);
    mpz_class b = y.floor(ok);
    if (!ok || b < low || b >= high) continue;
    LeadingInterval j = leading_interval(b.get_str(3), bits);
    if (mpfr_lessequal_p(j.left.hi().get(), w.lo().get()) && mpfr_less_p(w.hi().get(), j.right.lo().get())) {
      out.located = j.digits;
      out.bits = bits;
      out.agree = out.located == out.exact;
      return out;
    }
  }
  out.boundary = true;
  return out;
}

CensusReport leading_digit_census(const DyadicRational& lambda, std::uint64_t X, mpfr_prec_t precision_cap) {
  if (X < 2) throw InvalidArgument("real-orbit", "census needs X >= 2");
  CensusReport r;
  r.lambda = lambda;
  r.bound = X;

  const mpz_class Xz(static_cast<unsigned long>(X));
  std::size_t depth = 8;
  CFExpansion cf = cf_log3_2(depth, precision_cap);
  while (cf.q(cf.last_index()) < Xz) cf = cf_log3_2(depth *= 2, precision_cap);
  long l = 1;
  while (cf.q(l) < Xz) ++l;
  r.l = l;
  r.q_prev = cf.q(l - 1);
  unsigned k = 0;
  for (mpz_class p = 1; p < r.q_prev; p *= 3) ++k;
  r.k = std::max(1u, k);
  r.block_length = r.q_prev > 1 ? r.q_prev.get_ui() - 1 : 1;

  r.per_block.assign(X / r.block_length + 1, 0);
  const std::uint64_t s = lambda.exponent();
  const std::uint64_t first_doubling = std::max<std::uint64_t>(1, s);
  TernaryNat x;
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (n <= first_doubling) {
      x = floor_lambda_pow2(lambda, n);
    } else {
      x = times_two(x);
    }
    auto d = x.digits();
    const std::size_t top = std::min<std::size_t>(r.k, d.size());
    bool ok = true;
    for (std::size_t i = 0; i < top && ok; ++i) ok = d[d.size() - 1 - i] != 2;
    if (ok) {
      ++r.count;
      ++r.per_block[n / r.block_length];
    }
    if (omits_digit(x, 2)) ++r.exact_count;
  }
  for (auto c : r.per_block) r.max_per_block = std::max(r.max_per_block, c);
  r.block_bound = 6ull << (r.k - 1);
  r.blocks_ok = r.max_per_block <= r.block_bound;

  if (r.k <= 12) {
    for (const auto& j : leading_partition(r.k, 64)) r.digit2free_prefixes += j.digits.find('2') == std::string::npos;
  } else {
    r.digit2free_prefixes = 1ull << (r.k - 1);
  }
  r.prefix_count_bound = 6.0 * std::ldexp(1.0, static_cast<int>(r.k) - 1) *
                         (static_cast<double>(X) / static_cast<double>(r.block_length) + 1.0);
  r.power_bound = 25.0 * std::pow(static_cast<double>(X), 0.9725);
  r.within_power_bound = static_cast<double>(r.count) <= r.power_bound;
  r.within_prefix_count_bound = static_cast<double>(r.count) <= r.prefix_count_bound;
  return r;
}

}  // namespace ternary
