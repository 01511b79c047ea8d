#include "ternary/three_gap.hpp"

#include <algorithm>
#include <map>

#include "ternary/error.hpp"
#include "ternary/interval.hpp"

namespace ternary {

namespace {

mpz_class pow2z(unsigned bits) {
  mpz_class v = 1;
  v <<= bits;
  return v;
}

mpz_class abs_of(const mpz_class& v) { return v < 0 ? mpz_class(-v) : v; }

long agreeing_index(const CFExpansion& cf, const mpz_class& fixed, unsigned bits) {
  mpq_class value(fixed, pow2z(bits));
  value.canonicalize();
  auto own = cf_of_rational(value, cf.size() + 2);
  std::size_t common = 0;
  while (common < own.size() && common < cf.size() && own[common] == cf.quotients()[common]) ++common;
  return std::min<long>(static_cast<long>(common) - 2, cf.last_index());
}

}  // namespace

RotationAngle::RotationAngle(CFExpansion cf, mpz_class fixed, unsigned bits)
    : cf_(std::move(cf)), fixed_(std::move(fixed)), bits_(bits) {
  valid_index_ = agreeing_index(cf_, fixed_, bits_);
}

RotationAngle RotationAngle::log3_2(std::size_t depth, unsigned bits, mpfr_prec_t precision_cap) {
  CFExpansion cf = cf_log3_2(depth, precision_cap);
  for (mpfr_prec_t prec = bits + 64;; prec *= 2) {
    if (prec > precision_cap) throw InsufficientPrecision("real-orbit", "cannot fix log_3 2 to " + std::to_string(bits) + " bits");
    Interval alpha = Interval::log3_2(prec);
    mpfr_mul_2ui(alpha.lo().get(), alpha.lo().get(), bits, MPFR_RNDD);
    mpfr_mul_2ui(alpha.hi().get(), alpha.hi().get(), bits, MPFR_RNDU);
    bool ok = false;
    mpz_class fixed = alpha.floor(ok);
    if (ok) return RotationAngle(std::move(cf), std::move(fixed), bits);
  }
}

RotationAngle RotationAngle::from_cf(const CFExpansion& cf, unsigned bits) {
  if (cf.terminates()) throw InvalidArgument("real-orbit", "rotation angle must be irrational, continued fraction terminates");
  long last = cf.last_index();
  mpz_class fixed = cf.p(last) * pow2z(bits);
  mpz_fdiv_q(fixed.get_mpz_t(), fixed.get_mpz_t(), cf.q(last).get_mpz_t());
  return RotationAngle(cf, std::move(fixed), bits);
}

mpz_class fixed_offset(const std::string& decimal, unsigned bits) {
  mpz_class num = 0, den = 1;
  bool seen_point = false, any = false;
  for (char c : decimal) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
      any = true;
    } else {
      throw ParseError("real-orbit", "offset must be a non-negative decimal, got '" + decimal + "'");
    }
  }
  if (!any) throw ParseError("real-orbit", "empty offset");
  mpz_class out = num * pow2z(bits);
  mpz_fdiv_q(out.get_mpz_t(), out.get_mpz_t(), den.get_mpz_t());
  mpz_class mod = pow2z(bits);
  mpz_fdiv_r(out.get_mpz_t(), out.get_mpz_t(), mod.get_mpz_t());
  return out;
}

double GapSpectrum::length(std::size_t i) const {
  mpq_class q(lengths.at(i), pow2z(bits));
  return q.get_d();
}

std::size_t GapSpectrum::distinct() const {
  std::vector<mpz_class> seen;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (multiplicities[i] == 0) continue;
    if (std::find(seen.begin(), seen.end(), lengths[i]) == seen.end()) seen.push_back(lengths[i]);
  }
  return seen.size();
}

GapSpectrum three_gap(const RotationAngle& theta, std::uint64_t N) {
  if (N < 1) throw InvalidArgument("real-orbit", "N must be >= 1");
  const CFExpansion& cf = theta.cf();
  const mpz_class Nz(static_cast<unsigned long>(N));
  long n = -1;
  for (long i = 0; i + 1 <= theta.valid_index(); ++i) {
    if (cf.q(i) + cf.q(i - 1) <= Nz && Nz < cf.q(i + 1) + cf.q(i)) {
      n = i;
      break;
    }
  }
  if (n < 0) {
    throw InsufficientPrecision("real-orbit", "N = " + std::to_string(N) + " exceeds the available convergent depth");
  }
  const mpz_class rest = Nz - cf.q(n - 1);
  mpz_class jz = rest / cf.q(n) - 1;
  mpz_class kz = rest % cf.q(n);
  const mpz_class one = pow2z(theta.bits());
  const mpz_class d_n = cf.q(n) * theta.fixed() - cf.p(n) * one;
  const mpz_class d_prev = cf.q(n - 1) * theta.fixed() - cf.p(n - 1) * one;

  GapSpectrum out;
  out.N = N;
  out.bits = theta.bits();
  out.n = n;
  out.j = jz.get_si();
  out.k = kz.get_si();
  out.lengths = {abs_of(d_n), abs_of(d_prev + (jz + 1) * d_n), abs_of(d_prev + jz * d_n)};
  mpz_class m1 = jz * cf.q(n) + cf.q(n - 1) + kz + 1;
  mpz_class m3 = cf.q(n) - (kz + 1);
  out.multiplicities = {m1.get_ui(), static_cast<std::uint64_t>(out.k + 1), m3.get_ui()};
  return out;
}

GapSpectrum three_gap_bruteforce(const RotationAngle& theta, const mpz_class& offset, std::uint64_t N) {
  if (N < 1) throw InvalidArgument("real-orbit", "N must be >= 1");
  const mpz_class mod = pow2z(theta.bits());
  mpz_class step = theta.fixed() % mod;
  std::vector<mpz_class> points;
  points.reserve(N + 1);
  mpz_class v = offset % mod;
  for (std::uint64_t j = 0; j <= N; ++j) {
    points.push_back(v);
    v += step;
    if (v >= mod) v -= mod;
  }
  std::sort(points.begin(), points.end());
  std::map<mpz_class, std::uint64_t> arcs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    mpz_class arc = i + 1 < points.size() ? mpz_class(points[i + 1] - points[i]) : mpz_class(points[0] + mod - points[i]);
    if (arc == 0) {
      throw InsufficientPrecision("real-orbit", "two points coincide at " + std::to_string(theta.bits()) + " bits");
    }
    ++arcs[arc];
  }
  GapSpectrum out;
  out.N = N;
  out.bits = theta.bits();
  for (auto& [len, count] : arcs) {
    out.lengths.push_back(len);
    out.multiplicities.push_back(count);
  }
  return out;
}

bool same_spectrum(const GapSpectrum& a, const GapSpectrum& b, unsigned ulps) {
  auto collect = [](const GapSpectrum& s) {
    std::vector<std::pair<mpz_class, std::uint64_t>> out;
    for (std::size_t i = 0; i < s.lengths.size(); ++i) {
      if (s.multiplicities[i] == 0) continue;
      auto it = std::find_if(out.begin(), out.end(), [&](auto& e) { return e.first == s.lengths[i]; });
      if (it == out.end()) {
        out.emplace_back(s.lengths[i], s.multiplicities[i]);
      } else {
        it->second += s.multiplicities[i];
      }
    }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return out;
  };
  if (a.bits != b.bits) return false;
  auto x = collect(a), y = collect(b);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].second != y[i].second) return false;
    if (abs_of(x[i].first - y[i].first) > ulps) return false;
  }
  return true;
}

TwoLengthCheck check_two_lengths(const RotationAngle& theta, long n) {
  TwoLengthCheck out;
  out.n = n;
  mpz_class N = theta.cf().q(n + 1) - 1;
  if (N < 1) throw InvalidArgument("real-orbit", "q_{n+1} - 1 must be >= 1");
  out.N = N.get_ui();
  auto spectrum = three_gap(theta, out.N);
  std::vector<mpz_class> lens;
  for (std::size_t i = 0; i < spectrum.lengths.size(); ++i) {
    if (spectrum.multiplicities[i] > 0 && std::find(lens.begin(), lens.end(), spectrum.lengths[i]) == lens.end()) {
      lens.push_back(spectrum.lengths[i]);
    }
  }
  out.two_lengths = lens.size() == 2;
  if (out.two_lengths) {
    std::sort(lens.begin(), lens.end());
    out.short_length = lens[0];
    out.long_length = lens[1];
    out.ordered = lens[0] < lens[1] && lens[1] < 2 * lens[0];
  }
  return out;
}

}  // namespace ternary
