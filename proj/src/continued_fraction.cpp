#include "ternary/continued_fraction.hpp"

#include <algorithm>

#include "ternary/error.hpp"
#include "ternary/interval.hpp"

namespace ternary {

CFExpansion CFExpansion::from_quotients(std::vector<mpz_class> quotients, bool terminates) {
  if (quotients.empty()) throw InvalidArgument("real-orbit", "continued fraction needs a_0");
  for (std::size_t i = 1; i < quotients.size(); ++i) {
    if (quotients[i] < 1) throw InvalidArgument("real-orbit", "partial quotients after a_0 must be >= 1");
  }
  CFExpansion cf;
  cf.a_ = std::move(quotients);
  cf.terminates_ = terminates;
  cf.p_ = {0, 1};
  cf.q_ = {1, 0};
  for (const auto& ai : cf.a_) {
    std::size_t n = cf.p_.size();
    cf.p_.push_back(ai * cf.p_[n - 1] + cf.p_[n - 2]);
    cf.q_.push_back(ai * cf.q_[n - 1] + cf.q_[n - 2]);
  }
  return cf;
}

std::vector<mpz_class> cf_of_rational(const mpq_class& x, std::size_t max_terms) {
  std::vector<mpz_class> out;
  mpz_class num = x.get_num(), den = x.get_den();
  while (den != 0 && out.size() < max_terms) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(a);
    mpz_class r = num - a * den;
    num = den;
    den = r;
  }
  return out;
}

CFExpansion cf_log3_2(std::size_t depth, mpfr_prec_t precision_cap) {
  if (depth < 1) throw InvalidArgument("real-orbit", "depth must be >= 1");
  const std::size_t need = depth + 1;  // a_0 .. a_depth
  for (mpfr_prec_t bits = 256;; bits *= 2) {
    if (bits > precision_cap) {
      throw InsufficientPrecision("real-orbit", "continued fraction of log_3 2 to depth " + std::to_string(depth) +
                                                    " needs more than " + std::to_string(precision_cap) + " bits");
    }
    Interval alpha = Interval::log3_2(bits);
    auto lo = cf_of_rational(alpha.lo().to_mpq(), need + 2);
    auto hi = cf_of_rational(alpha.hi().to_mpq(), need + 2);
    std::size_t common = 0;
    while (common < lo.size() && common < hi.size() && lo[common] == hi[common]) ++common;
    // The last shared quotient can still differ for the true value when an
    // endpoint expansion stops there; drop it.
    std::size_t certified = common == 0 ? 0 : common - 1;
    if (certified >= need) {
      lo.resize(need);
      CFExpansion cf = CFExpansion::from_quotients(std::move(lo), false);
      cf.bits_ = bits;
      return cf;
    }
  }
}

int compare_pow3_pow2(unsigned long p, unsigned long q) {
  mpz_class a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), 3, p);
  mpz_ui_pow_ui(b.get_mpz_t(), 2, q);
  return cmp(a, b) < 0 ? -1 : (cmp(a, b) > 0 ? 1 : 0);
}

std::vector<ConvergentCheck> verify_convergents(const CFExpansion& cf, unsigned long exact_limit) {
  std::vector<ConvergentCheck> out;
  const mpfr_prec_t bits = std::max<mpfr_prec_t>(cf.certified_bits(), 256) * 2;
  const Interval alpha = Interval::log3_2(bits);
  int prev_side = 0;
  for (long i = 0; i <= cf.last_index(); ++i) {
    ConvergentCheck row;
    row.index = i;
    const mpz_class& p = cf.p(i);
    const mpz_class& q = cf.q(i);
    // q alpha - p, enclosed
    Interval err = alpha.scaled(q) - Interval::exact(p, bits);
    if (q <= exact_limit && p.fits_ulong_p() && q.fits_ulong_p()) {
      // p/q > log_3 2  <=>  3^p > 2^q
      row.side = compare_pow3_pow2(p.get_ui(), q.get_ui());
      row.exact = true;
    } else if (mpfr_sgn(err.hi().get()) < 0) {
      row.side = 1;
    } else if (mpfr_sgn(err.lo().get()) > 0) {
      row.side = -1;
    }
    row.alternates = row.side != 0 && (prev_side == 0 || row.side == -prev_side);
    prev_side = row.side;

    // |alpha - p/q| < 1/q^2  <=>  |q alpha - p| < 1/q
    Interval inv_q = div_pos(Interval::exact(1, bits), Interval::exact(q, bits));
    Real abs_hi(bits);
    mpfr_abs(abs_hi.get(), err.hi().get(), MPFR_RNDU);
    Real abs_lo(bits);
    mpfr_abs(abs_lo.get(), err.lo().get(), MPFR_RNDU);
    mpfr_max(abs_hi.get(), abs_hi.get(), abs_lo.get(), MPFR_RNDU);
    row.approximation_ok = mpfr_less_p(abs_hi.get(), inv_q.lo().get());
    out.push_back(row);
  }
  return out;
}

std::vector<GrowthRow> check_denominator_growth(const CFExpansion& cf) {
  std::vector<GrowthRow> out;
  mpz_class k1200_10;
  mpz_ui_pow_ui(k1200_10.get_mpz_t(), 1200, 10);
  for (long n = 1; n <= cf.last_index(); ++n) {
    mpz_class lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), cf.q(n).get_mpz_t(), 10);
    mpz_pow_ui(rhs.get_mpz_t(), cf.q(n - 1).get_mpz_t(), 133);
    rhs *= k1200_10;
    out.push_back({n, lhs <= rhs});
  }
  return out;
}

}  // namespace ternary
