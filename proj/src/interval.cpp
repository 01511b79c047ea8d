#include "ternary/interval.hpp"

#include <algorithm>
#include <vector>

namespace ternary {

mpq_class Real::to_mpq() const {
  if (mpfr_zero_p(v_)) return 0;
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
  mpq_class q(m);
  if (e >= 0) {
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    q *= scale;
  } else {
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    q /= scale;
  }
  q.canonicalize();
  return q;
}

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

Interval Interval::exact(const mpz_class& v, mpfr_prec_t bits) {
  Interval out(bits);
  mpfr_set_z(out.lo_.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_.get(), v.get_mpz_t(), MPFR_RNDU);
  return out;
}

Interval Interval::exact(long v, mpfr_prec_t bits) { return exact(mpz_class(v), bits); }

Interval Interval::ln(const mpz_class& v, mpfr_prec_t bits) {
  Interval x = exact(v, bits + 8);
  Interval out(bits);
  mpfr_log(out.lo_.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_log(out.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::log3_2(mpfr_prec_t bits) {
  Interval two(bits), three = ln(3, bits);
  mpfr_const_log2(two.lo_.get(), MPFR_RNDD);
  mpfr_const_log2(two.hi_.get(), MPFR_RNDU);
  return div_pos(two, three);
}

double Interval::width() const {
  Real w(53);
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w.to_double();
}

double Interval::mid() const {
  Real m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m.to_double();
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_add(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return out;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_sub(out.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(out.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return out;
}

Interval mul_nonneg(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_mul(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_mul(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return out;
}

Interval div_pos(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_div(out.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_div(out.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::scaled(const mpz_class& k) const {
  Interval out(precision());
  mpfr_mul_z(out.lo_.get(), lo_.get(), k.get_mpz_t(), MPFR_RNDD);
  mpfr_mul_z(out.hi_.get(), hi_.get(), k.get_mpz_t(), MPFR_RNDU);
  return out;
}

mpz_class Interval::floor(bool& ok) const {
  mpz_class a, b;
  mpfr_get_z(a.get_mpz_t(), lo_.get(), MPFR_RNDD);
  mpfr_get_z(b.get_mpz_t(), hi_.get(), MPFR_RNDD);
  ok = (a == b);
  return a;
}

Interval Interval::frac(bool& ok) const {
  mpz_class f = floor(ok);
  Interval out(precision());
  mpfr_sub_z(out.lo_.get(), lo_.get(), f.get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(out.hi_.get(), hi_.get(), f.get_mpz_t(), MPFR_RNDU);
  return out;
}

bool Interval::certainly_less(const Interval& other) const { return mpfr_less_p(hi_.get(), other.lo_.get()); }

bool Interval::certainly_less_equal(const Interval& other) const {
  return mpfr_lessequal_p(hi_.get(), other.lo_.get());
}

bool Interval::contains(const Interval& inner) const {
  return mpfr_lessequal_p(lo_.get(), inner.lo_.get()) && mpfr_lessequal_p(inner.hi_.get(), hi_.get());
}

}  // namespace ternary
