#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ternary/core.hpp"

namespace ternary {

/// Multipliers M_1 < ... < M_k with every factor of 3 removed, since
/// multiplying by 3 only shifts digits.
class MultiplierSet {
 public:
  /// Throws InvalidArgument on an empty list or a zero entry.
  static MultiplierSet normalize(const std::vector<std::uint64_t>& raw);
  /// Comma separated decimal list, e.g. "1,4,256". Throws ParseError.
  static MultiplierSet parse(std::string_view csv);

  const std::vector<std::uint64_t>& values() const noexcept { return values_; }
  const std::vector<std::uint64_t>& original() const noexcept { return original_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::uint64_t largest() const noexcept { return values_.back(); }
  bool is_trivial() const noexcept { return values_.size() == 1 && values_[0] == 1; }
  std::string to_string() const;

 private:
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> original_;
};

inline constexpr std::size_t kDefaultStateGuard = 1'000'000;

/// Reads lambda's digits (each 0 or 1) least significant first and tracks
/// the carry of every product M_i lambda. A digit is allowed when every
/// output digit (M_i d + c_i) mod 3 is 0 or 1.
struct CarryAutomaton {
  std::vector<std::uint64_t> multipliers;
  std::vector<std::uint64_t> carries;  // state s holds carries[s*k .. s*k+k)
  std::vector<std::array<std::int32_t, 2>> next;  // -1: digit not allowed
  std::size_t start = 0;
  bool trimmed = false;

  std::size_t arity() const noexcept { return multipliers.size(); }
  std::size_t size() const noexcept { return next.size(); }
  std::uint64_t carry(std::size_t state, std::size_t i) const { return carries[state * arity() + i]; }
  std::size_t edge_count() const;
  std::string state_label(std::size_t state) const;  // "(c_1,...,c_k)"
};

/// Reachable part of the carry machine. Throws SizeGuardExceeded past `guard` states.
CarryAutomaton build_automaton(const MultiplierSet& ms, std::size_t guard = kDefaultStateGuard);

/// Repeatedly removes states without outgoing edges. The start state always
/// survives through its d = 0 loop.
CarryAutomaton trim(const CarryAutomaton& a);

/// Whether the digit string (least significant first) is read without a missing edge.
bool accepts(const CarryAutomaton& a, const std::vector<Digit>& digits);

/// Number of accepted strings of length r.
mpz_class count_prefixes(const CarryAutomaton& a, unsigned r);
mpz_class count_prefixes(const MultiplierSet& ms, unsigned r, std::size_t guard = kDefaultStateGuard);
/// counts[r] for r = 0..R.
std::vector<mpz_class> prefix_counts(const CarryAutomaton& a, unsigned R);

/// Largest number of length-r paths leaving any one state, r = 0..R. This
/// is the max-row-sum norm of A^r, so it is submultiplicative and its r-th
/// root decreases to the spectral radius from above.
std::vector<mpz_class> max_path_counts(const CarryAutomaton& a, unsigned R);

/// True when the only infinite word is 0^infinity. Expects a trimmed machine.
bool accepts_only_zero_word(const CarryAutomaton& trimmed);

std::string to_dot(const CarryAutomaton& a);

struct DimensionOptions {
  std::size_t state_guard = kDefaultStateGuard;
  unsigned prefix_depth = 0;        // untrimmed counts for r = 1..prefix_depth
  double relative_tolerance = 1e-13;  // on the spectral radius
  std::size_t max_iterations = 2'000'000;
};

/// log_3 of the spectral radius of the trimmed machine.
struct DimensionEstimate {
  MultiplierSet multipliers;
  std::size_t states = 0;   // untrimmed
  std::size_t trimmed_states = 0;
  std::size_t components = 0;  // strongly connected components carrying a cycle
  mpq_class rho_lo, rho_hi;
  double rho = 0.0;
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // outward rounded
  /// rho is known exactly (every component is a single vertex or a simple cycle).
  bool exact = false;
  /// Exact test for rho > 1: some component is neither a vertex nor a simple cycle.
  bool positive = false;
  bool converged = true;
  std::size_t iterations = 0;
  std::vector<mpz_class> prefix_counts;  // r = 1..prefix_depth
  std::vector<double> slopes;            // log_3(count) / r

  double width() const noexcept { return hi - lo; }
};

DimensionEstimate hausdorff_dimension(const MultiplierSet& ms, const DimensionOptions& opt = {});

inline constexpr std::size_t kCharpolyStateLimit = 64;

/// Characteristic polynomial of the trimmed transition matrix and its
/// largest real root, which is the spectral radius.
struct CharpolyResult {
  std::vector<mpz_class> coefficients;  // monic, coefficients[i] multiplies x^i
  mpq_class root_lo, root_hi;           // isolates the largest real root
  /// Monic integer factor of degree 1 or 2 vanishing at rho, when one exists.
  std::vector<mpz_class> factor;
  std::string closed_form;  // e.g. "(1+sqrt(5))/2"; empty when no small factor
};

/// Throws SizeGuardExceeded for more than kCharpolyStateLimit trimmed states.
CharpolyResult exact_spectral_radius(const CarryAutomaton& trimmed);

struct GreedyResult {
  std::vector<Digit> digits;  // least significant first, digits[0] = 1
  bool found = false;
  std::size_t backtracks = 0;
  bool verified = false;  // low r digits of M * prefix omit 2, checked with mul_small
};

/// A prefix d_0 = 1, d_1..d_{r-1} in {0,1} of an element of C(1,M). Prefers
/// 0 at each step and backtracks depth first when both digits fail, unless
/// `backtrack` is false. Throws InvalidArgument unless M = 1 mod 3 and r >= 1.
GreedyResult greedy_element(std::uint64_t M, unsigned r, bool backtrack = true);

struct MultipleSearch {
  std::optional<mpz_class> N;       // smallest valid N
  std::vector<mpz_class> products;  // N M_i
  std::size_t digits = 0;           // ternary digits of N M_k
  double bound = 0.0;               // log_3(2) / digits
  std::uint64_t examined = 0;
};

/// Smallest N <= n_max with N and every N M_i free of the digit 2.
/// Candidates run through the digit-{0,1} integers in increasing order.
MultipleSearch search_digit2free_multiple(const MultiplierSet& ms, const mpz_class& n_max);

/// Decides exactly whether some positive integer N has N and all N M_i free
/// of the digit 2, by a search over (state, nonzero digit seen) pairs.
struct MultipleExistence {
  bool exists = false;
  std::optional<mpz_class> witness;  // fewest digits
};
MultipleExistence digit2free_multiple_exists(const MultiplierSet& ms, std::size_t guard = kDefaultStateGuard);

struct SigmaSubsetReport {
  unsigned r = 0;
  std::uint64_t a_strings = 0, a_accepted = 0;  // odd positions 0, accepted by C(1,4)
  std::uint64_t b_strings = 0, b_accepted = 0;  // positions != 0 mod 6 zero, by C(1,4,256)
  double a_bound = 0.0;  // log_3(2) / 2
  double b_bound = 0.0;  // log_3(2) / 6

  bool ok() const noexcept { return a_accepted == a_strings && b_accepted == b_strings; }
};

/// Requires r a multiple of 6 with 6 <= r <= 36 (InvalidArgument otherwise).
SigmaSubsetReport verify_sigma_subsets(unsigned r);

struct ScanRow {
  std::uint64_t M = 0;
  double lo = 0.0, hi = 0.0;
  bool in_h = false;        // enclosure strictly positive
  bool positive = false;    // exact criterion
  bool in_c = false;        // digit-2-free multiple exists
  std::optional<mpz_class> witness;
  std::optional<mpz_class> search_N;  // smallest N <= search bound
};

struct ScanReport {
  std::uint64_t bound = 0;
  std::vector<ScanRow> rows;  // M <= bound, M coprime to 3
  std::vector<std::uint64_t> in_h_not_c;
  std::size_t count_c = 0, count_h = 0;
  /// in_h agrees with the exact criterion, M_C is inside M_H, and every
  /// search hit is also an exact hit.
  bool consistent = false;
};

inline constexpr std::uint64_t kDefaultScanLimit = 3000;

/// Throws InvalidArgument when X exceeds `limit`.
ScanReport scan_problems(std::uint64_t X, unsigned threads = 0, std::uint64_t limit = kDefaultScanLimit,
                         std::uint64_t search_bound = 100000);

}  // namespace ternary
