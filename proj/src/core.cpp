#include "ternary/core.hpp"

#include <algorithm>
#include <charconv>

#include "ternary/error.hpp"

namespace ternary {

namespace {

constexpr std::uint64_t kChunkBase = 1162261467;  // 3^19
constexpr std::size_t kChunkDigits = 19;

}  // namespace

TernaryNat::TernaryNat(std::uint64_t value) {
  while (value != 0) {
    digits_.push_back(static_cast<Digit>(value % 3));
    value /= 3;
  }
}

void TernaryNat::trim() noexcept {
  while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
}

TernaryNat TernaryNat::from_digits(std::vector<Digit> lsd_first) {
  for (Digit d : lsd_first) {
    if (d > 2) throw InvalidArgument("ternary-core", "digit out of range: " + std::to_string(d));
  }
  TernaryNat out(std::move(lsd_first));
  out.trim();
  return out;
}

TernaryNat TernaryNat::parse(std::string_view msd_first) {
  if (msd_first.empty()) throw ParseError("ternary-core", "empty digit string");
  std::vector<Digit> digits;
  digits.reserve(msd_first.size());
  for (auto it = msd_first.rbegin(); it != msd_first.rend(); ++it) {
    if (*it < '0' || *it > '2') {
      throw ParseError("ternary-core",
                       "invalid ternary digit '" + std::string(1, *it) + "' in \"" +
                           std::string(msd_first) + "\"");
    }
    digits.push_back(static_cast<Digit>(*it - '0'));
  }
  TernaryNat out(std::move(digits));
  out.trim();
  return out;
}

TernaryNat TernaryNat::from_mpz(const mpz_class& value) {
  if (value < 0) throw InvalidArgument("ternary-core", "negative value");
  std::vector<Digit> digits;
  mpz_class rest = value;
  while (rest != 0) {
    unsigned long chunk = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), kChunkBase);
    for (std::size_t i = 0; i < kChunkDigits; ++i) {
      digits.push_back(static_cast<Digit>(chunk % 3));
      chunk /= 3;
    }
  }
  TernaryNat out(std::move(digits));
  out.trim();
  return out;
}

TernaryNat TernaryNat::from_decimal(std::string_view decimal) {
  if (decimal.empty() ||
      !std::all_of(decimal.begin(), decimal.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("ternary-core", "not a decimal natural: \"" + std::string(decimal) + "\"");
  }
  return from_mpz(mpz_class(std::string(decimal), 10));
}

bool TernaryNat::is_even() const noexcept {
  // 3 = 1 (mod 2), so the parity is the parity of the digit sum.
  unsigned ones = 0;
  for (Digit d : digits_) ones += d;
  return ones % 2 == 0;
}

std::string TernaryNat::to_string() const {
  if (digits_.empty()) return "0";
  std::string out;
  out.reserve(digits_.size());
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) out.push_back(static_cast<char>('0' + *it));
  return out;
}

mpz_class TernaryNat::to_mpz() const {
  mpz_class out = 0;
  std::size_t top = digits_.size();
  // Horner over 19-digit chunks from the most significant end.
  std::size_t first = top % kChunkDigits;
  if (first == 0 && top != 0) first = kChunkDigits;
  std::size_t pos = top;
  std::size_t width = first;
  while (pos > 0) {
    std::uint64_t chunk = 0;
    for (std::size_t i = 0; i < width; ++i) chunk = chunk * 3 + digits_[pos - 1 - i];
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < width; ++i) scale *= 3;
    out *= static_cast<unsigned long>(scale);
    out += static_cast<unsigned long>(chunk);
    pos -= width;
    width = kChunkDigits;
  }
  return out;
}

std::string TernaryNat::to_decimal() const { return to_mpz().get_str(10); }

TernaryNat TernaryNat::low_digits(std::size_t k) const {
  std::vector<Digit> low(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(std::min(k, digits_.size())));
  TernaryNat out(std::move(low));
  out.trim();
  return out;
}

TernaryNat TernaryNat::shifted(std::size_t k) const {
  if (digits_.empty()) return {};
  std::vector<Digit> out(k, 0);
  out.insert(out.end(), digits_.begin(), digits_.end());
  return TernaryNat(std::move(out));
}

std::strong_ordering operator<=>(const TernaryNat& a, const TernaryNat& b) {
  if (a.digits_.size() != b.digits_.size()) return a.digits_.size() <=> b.digits_.size();
  for (std::size_t i = a.digits_.size(); i-- > 0;) {
    if (a.digits_[i] != b.digits_[i]) return a.digits_[i] <=> b.digits_[i];
  }
  return std::strong_ordering::equal;
}

TernaryNat operator+(const TernaryNat& a, const TernaryNat& b) {
  std::size_t n = std::max(a.size(), b.size());
  std::vector<Digit> out;
  out.reserve(n + 1);
  unsigned carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    unsigned t = a.digit(i) + b.digit(i) + carry;
    out.push_back(static_cast<Digit>(t % 3));
    carry = t / 3;
  }
  if (carry) out.push_back(static_cast<Digit>(carry));
  return TernaryNat(std::move(out));
}

TernaryNat operator-(const TernaryNat& a, const TernaryNat& b) {
  if (a < b) throw InvalidArgument("ternary-core", "subtraction would be negative");
  std::vector<Digit> out;
  out.reserve(a.size());
  int borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int t = int(a.digit(i)) - int(b.digit(i)) - borrow;
    borrow = t < 0;
    out.push_back(static_cast<Digit>(t + 3 * borrow));
  }
  TernaryNat r(std::move(out));
  r.trim();
  return r;
}

TernaryNat times_two(const TernaryNat& x) { return mul_small(x, 2); }

TernaryNat mul_small(const TernaryNat& x, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("ternary-core", "mul_small multiplier must be positive");
  if (x.is_zero()) return {};
  std::vector<Digit> out;
  out.reserve(x.size() + 41);
  // carry < m always, so carry + 2m fits as long as m < 2^62.
  unsigned __int128 carry = 0;
  for (Digit d : x.digits()) {
    unsigned __int128 t = static_cast<unsigned __int128>(m) * d + carry;
    out.push_back(static_cast<Digit>(t % 3));
    carry = t / 3;
  }
  while (carry != 0) {
    out.push_back(static_cast<Digit>(carry % 3));
    carry /= 3;
  }
  return TernaryNat::from_digits(std::move(out));
}

std::pair<TernaryNat, std::uint64_t> div_small(const TernaryNat& x, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("ternary-core", "division by zero");
  std::vector<Digit> q(x.size(), 0);
  unsigned __int128 rem = 0;
  for (std::size_t i = x.size(); i-- > 0;) {
    unsigned __int128 t = rem * 3 + x.digit(i);
    q[i] = static_cast<Digit>(t / m);
    rem = t % m;
  }
  return {TernaryNat::from_digits(std::move(q)), static_cast<std::uint64_t>(rem)};
}

TernaryNat pow2(std::uint64_t n) {
  TernaryNat x(1);
  for (std::uint64_t i = 0; i < n; ++i) x = times_two(x);
  return x;
}

TernaryNat pow3(std::size_t k) { return TernaryNat(1).shifted(k); }

bool omits_digit(const TernaryNat& x, Digit d) {
  if (d > 2) throw InvalidArgument("ternary-core", "digit out of range");
  return std::find(x.digits().begin(), x.digits().end(), d) == x.digits().end();
}

TernaryNat floor_lambda_pow2(const DyadicRational& lambda, std::uint64_t n) {
  if (!lambda.is_positive()) throw InvalidArgument("ternary-core", "lambda must be positive");
  TernaryNat x = lambda.numerator();
  if (n >= lambda.exponent()) {
    for (std::uint64_t i = lambda.exponent(); i < n; ++i) x = times_two(x);
    return x;
  }
  std::uint64_t shift = lambda.exponent() - n;
  // Halve in 62-bit steps; floor(floor(a/b)/c) = floor(a/(bc)).
  while (shift > 0 && !x.is_zero()) {
    std::uint64_t step = std::min<std::uint64_t>(shift, 62);
    x = div_small(x, std::uint64_t{1} << step).first;
    shift -= step;
  }
  return x;
}

std::string leading_digits(const TernaryNat& x, std::size_t k) {
  if (x.size() < k) {
    throw InsufficientLength("ternary-core", "need " + std::to_string(k) + " digits, value has " +
                                                 std::to_string(x.size()));
  }
  std::string out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(static_cast<char>('0' + x.digit(x.size() - 1 - i)));
  return out;
}

DyadicRational::DyadicRational(TernaryNat numerator, std::uint64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_.is_zero()) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && numerator_.is_even()) {
    numerator_ = div_small(numerator_, 2).first;
    --exponent_;
  }
}

DyadicRational DyadicRational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  TernaryNat a = TernaryNat::from_decimal(num);
  if (slash == std::string_view::npos) return DyadicRational(a, 0);

  std::string_view den = text.substr(slash + 1);
  std::uint64_t s = 0;
  if (den.starts_with("2^")) {
    den.remove_prefix(2);
    auto [ptr, ec] = std::from_chars(den.data(), den.data() + den.size(), s);
    if (ec != std::errc{} || ptr != den.data() + den.size()) {
      throw ParseError("ternary-core", "bad exponent in \"" + std::string(text) + "\"");
    }
  } else {
    mpz_class d;
    if (den.empty() || d.set_str(std::string(den), 10) != 0 || d <= 0) {
      throw ParseError("ternary-core", "bad denominator in \"" + std::string(text) + "\"");
    }
    if (mpz_popcount(d.get_mpz_t()) != 1) {
      throw ParseError("ternary-core", "denominator is not a power of two: \"" + std::string(text) + "\"");
    }
    s = mpz_sizeinbase(d.get_mpz_t(), 2) - 1;
  }
  return DyadicRational(a, s);
}

std::string DyadicRational::to_string() const {
  if (exponent_ == 0) return numerator_.to_decimal();
  return numerator_.to_decimal() + "/2^" + std::to_string(exponent_);
}

}  // namespace ternary
