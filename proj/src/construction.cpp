#include "ternary/construction.hpp"

#include <algorithm>

#include "ternary/error.hpp"
#include "ternary/interval.hpp"

namespace ternary {

namespace {

mpz_class pow_ui(unsigned long base, unsigned long e) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), base, e);
  return v;
}

mpz_class pow_z(unsigned long base, const mpz_class& e) {
  if (!e.fits_ulong_p()) throw SizeGuardExceeded("real-orbit", "exponent " + e.get_str() + " too large to expand");
  return pow_ui(base, e.get_ui());
}

mpfr_prec_t start_bits(const mpz_class& l, std::uint64_t T) {
  return static_cast<mpfr_prec_t>(2 * (T + mpz_sizeinbase(l.get_mpz_t(), 2)) + 128);
}

// Places l log_3 2 - p against (0, 2^-T), raising precision until decided:
// -1 below 0, 0 inside, +1 at or above 2^-T.
int locate_frac(const mpz_class& l, const mpz_class& p, std::uint64_t T, mpfr_prec_t cap, double* upper = nullptr) {
  for (mpfr_prec_t bits = start_bits(l, T); bits <= cap; bits *= 2) {
    Interval f = Interval::log3_2(bits).scaled(l) - Interval::exact(p, bits);
    Real thr(bits);
    mpfr_set_ui_2exp(thr.get(), 1, -static_cast<mpfr_exp_t>(T), MPFR_RNDN);
    if (upper) *upper = f.hi().to_double();
    if (mpfr_sgn(f.hi().get()) < 0) return -1;
    if (mpfr_cmp(f.lo().get(), thr.get()) >= 0) return 1;
    if (mpfr_sgn(f.lo().get()) > 0 && mpfr_less_p(f.hi().get(), thr.get())) return 0;
  }
  throw InsufficientPrecision("real-orbit", "frac(" + l.get_str() + " log_3 2) not separated from 2^-" +
                                                std::to_string(T));
}

// Certified floor(x log_3 2) for x >= 0.
mpz_class floor_times_alpha(const mpz_class& x, mpfr_prec_t cap) {
  for (mpfr_prec_t bits = start_bits(x, 0); bits <= cap; bits *= 2) {
    bool ok = false;
    mpz_class f = Interval::log3_2(bits).scaled(x).floor(ok);
    if (ok) return f;
  }
  throw InsufficientPrecision("real-orbit", "floor(" + x.get_str() + " log_3 2) not settled");
}

// Rejects every l' in [lo, hi) with a fixed-point rotation; ambiguous
// points fall back to interval evaluation.
void scan_rejects(std::uint64_t lo, std::uint64_t hi, std::uint64_t T, mpfr_prec_t cap) {
  if (lo >= hi) return;
  const unsigned B = static_cast<unsigned>(std::max<std::uint64_t>(256, T + 128));
  mpz_class theta;
  for (mpfr_prec_t bits = B + 64;; bits *= 2) {
    if (bits > cap) throw InsufficientPrecision("real-orbit", "cannot fix log_3 2 for the scan");
    Interval a = Interval::log3_2(bits);
    mpfr_mul_2ui(a.lo().get(), a.lo().get(), B, MPFR_RNDD);
    mpfr_mul_2ui(a.hi().get(), a.hi().get(), B, MPFR_RNDU);
    bool ok = false;
    theta = a.floor(ok);
    if (ok) break;
  }
  mpz_class one = 1;
  one <<= B;
  mpz_class thr = 1;
  thr <<= (B - T);
  mpz_class f = (theta * static_cast<unsigned long>(lo)) % one;
  for (std::uint64_t l = lo; l < hi; ++l) {
    // frac(l alpha) 2^B lies in [f, f + l) when that range does not wrap.
    mpz_class top = f + static_cast<unsigned long>(l);
    bool rejected = f >= thr && top < one;
    if (!rejected) {
      mpz_class ml(static_cast<unsigned long>(l));
      mpz_class p = floor_times_alpha(ml, cap);
      if (locate_frac(ml, p, T, cap) == 0) {
        throw Error("real-orbit", "l = " + std::to_string(l) + " satisfies the bound below the ladder winner");
      }
    }
    f += theta;
    if (f >= one) f -= one;
  }
}

// Smallest z with 3^z > 2^n.
std::uint64_t ceil_n_alpha(std::uint64_t n) {
  mpz_class two = pow_ui(2, n), three = 1;
  std::uint64_t z = 0;
  while (three < two) {
    three *= 3;
    ++z;
  }
  return z;
}

}  // namespace

LkResult find_lk(std::uint64_t m_prev, unsigned k, std::uint64_t scan_limit, mpfr_prec_t precision_cap) {
  if (k < 1) throw InvalidArgument("real-orbit", "level k must be >= 1");
  LkResult out;
  out.k = k;
  out.m_prev = m_prev;
  const std::uint64_t T = m_prev + 2ull * k + 4;
  out.threshold_exponent = T;
  const mpz_class min_l = 2ul * k;

  std::size_t depth = 40;
  CFExpansion cf = cf_log3_2(depth, precision_cap);
  bool found = false, skipped_hit = false;
  for (long j = 0; !found; ++j) {
    while (cf.last_index() < 2 * j + 2) cf = cf_log3_2(depth *= 2, precision_cap);
    const mpz_class& steps = cf.a(2 * j + 2);
    for (mpz_class t = 0; t < steps && !found; ++t) {
      mpz_class l = cf.q(2 * j) + t * cf.q(2 * j + 1);
      mpz_class p = cf.p(2 * j) + t * cf.p(2 * j + 1);
      double upper = 0;
      int where = locate_frac(l, p, T, precision_cap, &upper);
      if (where != 0) continue;
      if (l < min_l) {
        skipped_hit = true;
        continue;
      }
      out.l = l;
      out.r = p;
      out.frac_upper = upper;
      found = true;
    }
    out.cf_depth = static_cast<std::size_t>(2 * j + 3);
    if (skipped_hit) break;
  }
  if (!found) {
    // The winner lies below 2k; search upward from 2k directly.
    for (std::uint64_t l = 2ull * k; l < scan_limit; ++l) {
      mpz_class ml(static_cast<unsigned long>(l));
      mpz_class p = floor_times_alpha(ml, precision_cap);
      double upper = 0;
      if (locate_frac(ml, p, T, precision_cap, &upper) == 0) {
        out.l = ml;
        out.r = p;
        out.frac_upper = upper;
        found = true;
        break;
      }
    }
    if (!found) throw InsufficientPrecision("real-orbit", "no l below the scan limit");
  }

  const std::uint64_t start = 2ull * k;
  const std::uint64_t end = out.l.fits_ulong_p() ? std::min<std::uint64_t>(out.l.get_ui(), scan_limit) : scan_limit;
  scan_rejects(start, end, T, precision_cap);
  out.scanned_below = end;
  out.exhaustive = out.l.fits_ulong_p() && end == out.l.get_ui();

  const long e = static_cast<long>(m_prev) + 2 * static_cast<long>(k) - 7;
  if (e <= 0) {
    out.growth_bound_ok = true;
  } else {
    mpz_class lhs, rhs = 1;
    mpz_pow_ui(lhs.get_mpz_t(), out.l.get_mpz_t(), 133);
    rhs <<= static_cast<mp_bitcnt_t>(10 * e);
    out.growth_bound_ok = lhs >= rhs;
  }

  out.zeros_needed = ceil_n_alpha(m_prev + 2ull * k + 2);
  if (out.l <= 1000000) {
    std::string t = pow_z(2, out.l).get_str(3);
    std::uint64_t zeros = 0;
    while (1 + zeros < t.size() && t[1 + zeros] == '0') ++zeros;
    out.leading_zeros = zeros;
    out.leading_ok = t[0] == '1' && zeros >= out.zeros_needed;
  }
  return out;
}

mpz_class digit02_unrank(const mpz_class& j) {
  if (j < 0) throw InvalidArgument("real-orbit", "rank must be non-negative");
  mpz_class out = 0, place = 1;
  mpz_class rest = j;
  while (rest > 0) {
    if (mpz_odd_p(rest.get_mpz_t())) out += 2 * place;
    place *= 3;
    rest >>= 1;
  }
  return out;
}

mpz_class digit02_rank(const mpz_class& x) {
  if (x < 0) return 0;
  std::string t = x.get_str(3);
  mpz_class count = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::size_t below = t.size() - 1 - i;
    if (t[i] == '0') continue;
    mpz_class block = 1;
    block <<= below;
    count += block;  // a 0 here, anything below
    if (t[i] == '1') return count;
  }
  return count + 1;  // x itself
}

DigitPolicy DigitPolicy::parse(const std::string& text) {
  DigitPolicy p;
  if (text == "min") {
    p.kind = Kind::Min;
  } else if (text == "max") {
    p.kind = Kind::Max;
  } else if (text.rfind("random:", 0) == 0 && text.size() > 7 &&
             text.find_first_not_of("0123456789", 7) == std::string::npos) {
    p.kind = Kind::Random;
    p.seed = std::stoull(text.substr(7));
  } else {
    throw ParseError("real-orbit", "digit policy must be min, max or random:<seed>, got '" + text + "'");
  }
  return p;
}

std::string DigitPolicy::to_string() const {
  switch (kind) {
    case Kind::Min: return "min";
    case Kind::Max: return "max";
    case Kind::Random: return "random:" + std::to_string(seed);
  }
  return "";
}

bool ConstructionReport::all_ok() const {
  if (levels.empty()) return false;
  for (const auto& lv : levels) {
    if (!lv.violation.empty() || !lv.p1 || !lv.p2 || !lv.floor_ok || !lv.even || !lv.half_digit2free ||
        !lv.count_ok || !lv.carry_ok || !lv.s_matches_floor || !lv.lk.growth_bound_ok || !lv.lk.leading_ok.value_or(true)) {
      return false;
    }
  }
  return lambda_range_ok && product_ok;
}

ConstructionReport construct_cantor_lambda(unsigned levels, const DigitPolicy& policy, mpfr_prec_t precision_cap,
                                           std::uint64_t scan_limit) {
  if (levels < 1) throw InvalidArgument("real-orbit", "levels must be >= 1");
  if (levels > 2) {
    throw Infeasible("real-orbit", "level " + std::to_string(levels) +
                                       " needs precision of order 2^(m_2) bits with m_2 above 10^22; capped at 2");
  }
  ConstructionReport rep;
  rep.levels_requested = levels;
  rep.d0 = 2;
  rep.policy = policy;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(static_cast<unsigned long>(policy.seed));

  mpz_class M_prev = rep.d0;
  mpz_class m_prev = 0, s = 0;
  for (unsigned k = 1; k <= levels; ++k) {
    LkResult lk = find_lk(m_prev.get_ui(), k, scan_limit, precision_cap);
    mpz_class m = m_prev + lk.l;
    if (m > precision_cap) {
      rep.unbuilt.push_back(lk);
      rep.infeasible_reason = "level " + std::to_string(k) + " needs M_" + std::to_string(k) + " with m_" +
                              std::to_string(k) + " = " + m.get_str() + " bits, above the precision cap of " +
                              std::to_string(precision_cap) + " bits";
      break;
    }
    LevelRecord lv;
    lv.k = k;
    lv.lk = lk;
    lv.m = m;
    s += lk.r;
    lv.s = s;
    lv.s_matches_floor = floor_times_alpha(m, precision_cap) == s;

    const mpz_class p3 = pow_z(3, lk.r);
    const mpz_class p2 = pow_z(2, lk.l);
    const mpz_class p3k = pow_z(3, lk.r - k);
    lv.carry = M_prev * (p2 - p3);
    lv.carry_ok = lv.carry >= 0 && lv.carry <= p3k;
    lv.digit_bound = p3 - p3k;

    const mpz_class base = M_prev * p2;
    const mpz_class lo_rank = digit02_rank(base - 1);
    const mpz_class hi_rank = digit02_rank(base + lv.digit_bound);
    lv.admissible = hi_rank - lo_rank;
    lv.claimed = pow_z(2, lk.r) - pow_z(2, lk.r - k);
    lv.count_ok = lv.admissible >= lv.claimed;

    if (policy.fixed.size() >= k) {
      lv.d = policy.fixed[k - 1];
    } else if (lv.admissible == 0) {
      lv.violation = "no admissible digit";
    } else if (policy.kind == DigitPolicy::Kind::Min) {
      lv.d = digit02_unrank(lo_rank) - base;
    } else if (policy.kind == DigitPolicy::Kind::Max) {
      lv.d = digit02_unrank(hi_rank - 1) - base;
    } else {
      lv.d = digit02_unrank(lo_rank + rng.get_z_range(lv.admissible)) - base;
    }
    lv.M = base + lv.d;
    lv.p1 = lv.d >= 0 && lv.d <= lv.digit_bound;
    const std::string t = lv.M.get_str(3);
    lv.p2 = t.find('1') == std::string::npos;
    lv.even = mpz_even_p(lv.M.get_mpz_t()) != 0;
    const mpz_class half = lv.M / 2;
    lv.half_digit2free = half.get_str(3).find('2') == std::string::npos;
    if (lv.violation.empty() && !lv.p1) lv.violation = "(P1) d_k outside [0, 3^r - 3^(r-k)]";
    if (lv.violation.empty() && !lv.p2) lv.violation = "(P2) (M_k)_3 contains the digit 1";

    rep.levels.push_back(lv);
    rep.levels_built = k;
    M_prev = lv.M;
    m_prev = m;
    if (!lv.violation.empty()) break;
  }

  if (rep.levels.empty()) return rep;
  const LevelRecord& last = rep.levels.back();
  const std::uint64_t mK = last.m.get_ui();
  rep.lambda = DyadicRational(TernaryNat::from_mpz(last.M), mK);
  for (auto& lv : rep.levels) {
    lv.floor_ok = floor_lambda_pow2(rep.lambda, lv.m.get_ui()).to_mpz() == lv.M;
  }
  const mpz_class scale = pow_ui(2, mK);
  rep.lambda_range_ok = rep.d0 * scale <= last.M && last.M + 1 <= (rep.d0 + 1) * scale;

  mpz_class product = 1;
  for (const auto& lv : rep.levels) product *= lv.claimed;
  rep.product_ok = 4 * product >= pow_z(2, last.s);
  return rep;
}

}  // namespace ternary
