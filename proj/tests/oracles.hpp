#pragma once

// Test-only reference routines. None of these call into the library, so they
// stay independent of the code paths they check.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// Decimal digit strings, schoolbook arithmetic.
inline std::string decimal_mul_add(const std::string& dec, unsigned mul, unsigned add) {
  std::string out;
  unsigned carry = add;
  for (auto it = dec.rbegin(); it != dec.rend(); ++it) {
    unsigned t = unsigned(*it - '0') * mul + carry;
    out.push_back(char('0' + t % 10));
    carry = t / 10;
  }
  while (carry) {
    out.push_back(char('0' + carry % 10));
    carry /= 10;
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  std::reverse(out.begin(), out.end());
  return out.empty() ? "0" : out;
}

// Most-significant-first ternary string to decimal string.
inline std::string ternary_to_decimal(const std::string& ternary) {
  std::string dec = "0";
  for (char c : ternary) dec = decimal_mul_add(dec, 3, unsigned(c - '0'));
  return dec;
}

// Decimal string to most-significant-first ternary string by repeated
// long division by 3.
inline std::string decimal_to_ternary(std::string dec) {
  std::string out;
  auto is_zero = [](const std::string& s) { return s.find_first_not_of('0') == std::string::npos; };
  while (!is_zero(dec)) {
    std::string q;
    unsigned rem = 0;
    for (char c : dec) {
      unsigned t = rem * 10 + unsigned(c - '0');
      q.push_back(char('0' + t / 3));
      rem = t % 3;
    }
    out.push_back(char('0' + rem));
    dec = q;
  }
  std::reverse(out.begin(), out.end());
  return out.empty() ? "0" : out;
}

// 2^n by GMP (binary powering), converted by GMP's own base-3 printer.
inline std::string pow2_base3(unsigned long n) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, n);
  return v.get_str(3);
}

inline bool ternary_omits(const std::string& s, char d) { return s.find(d) == std::string::npos; }

// Ternary digits of v, least significant first, padded to `width`.
inline std::vector<int> low_digits(const mpz_class& v, std::size_t width) {
  std::vector<int> out;
  mpz_class rest = v;
  for (std::size_t i = 0; i < width; ++i) {
    mpz_class r = rest % 3;
    out.push_back(int(r.get_si()));
    rest /= 3;
  }
  return out;
}

}  // namespace oracle

namespace oracle {

// p/q > log_3 2 exactly when 3^p > 2^q.
inline bool above_log3_2(unsigned long p, unsigned long q) {
  mpz_class a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), 3, p);
  mpz_ui_pow_ui(b.get_mpz_t(), 2, q);
  return a > b;
}

// Partial quotients of log_3 2 from exact power comparisons only. Each
// quotient is the longest run of intermediate fractions that stay on the
// side of the previous-but-one convergent.
inline std::vector<unsigned long> log3_2_quotients(std::size_t count) {
  std::vector<unsigned long> a{0};
  unsigned long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // 1/0 above, 0/1 below
  bool prev_above = true;
  while (a.size() < count) {
    unsigned long m = 0;
    while (above_log3_2((m + 1) * p1 + p0, (m + 1) * q1 + q0) == prev_above) ++m;
    a.push_back(m);
    unsigned long p2 = m * p1 + p0, q2 = m * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    prev_above = !prev_above;
  }
  return a;
}

}  // namespace oracle
