#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace ternary {

/// Owning handle for an mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(Real other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exact value as a rational (mpfr values are dyadic).
  mpq_class to_mpq() const;

  /// Decimal rendering with `digits` significant digits.
  std::string to_string(int digits = 30) const;

 private:
  mpfr_t v_;
};

/// Closed interval [lo, hi] with outward-rounded arithmetic.
class Interval {
 public:
  explicit Interval(mpfr_prec_t bits) : lo_(bits), hi_(bits) {}

  static Interval exact(const mpz_class& v, mpfr_prec_t bits);
  static Interval exact(long v, mpfr_prec_t bits);
  static Interval log3_2(mpfr_prec_t bits);
  static Interval ln(const mpz_class& v, mpfr_prec_t bits);  // v >= 1

  const Real& lo() const noexcept { return lo_; }
  const Real& hi() const noexcept { return hi_; }
  Real& lo() noexcept { return lo_; }
  Real& hi() noexcept { return hi_; }
  mpfr_prec_t precision() const noexcept { return lo_.precision(); }

  double width() const;
  double mid() const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  /// Both operands non-negative.
  friend Interval mul_nonneg(const Interval& a, const Interval& b);
  /// Numerator non-negative, divisor strictly positive.
  friend Interval div_pos(const Interval& a, const Interval& b);

  Interval scaled(const mpz_class& k) const;  // k >= 0

  /// Fractional part when floor(lo) == floor(hi); sets `ok` false otherwise.
  Interval frac(bool& ok) const;
  /// floor(lo) when it equals floor(hi); sets `ok` false otherwise.
  mpz_class floor(bool& ok) const;

  /// Certified comparisons; false when the order is not decided.
  bool certainly_less(const Interval& other) const;
  bool certainly_less_equal(const Interval& other) const;
  bool contains(const Interval& inner) const;

 private:
  Real lo_, hi_;
};

}  // namespace ternary
