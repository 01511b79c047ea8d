#include "ternary/automaton.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ternary/error.hpp"
#include "ternary/interval.hpp"

namespace ternary {

namespace {

constexpr const char* kModule = "cantor-automaton";

bool omits_two(mpz_class v) {
  while (v > 0) {
    if (mpz_fdiv_ui(v.get_mpz_t(), 3) == 2) return false;
    v /= 3;
  }
  return true;
}

bool omits_two(std::uint64_t v) {
  for (; v; v /= 3) {
    if (v % 3 == 2) return false;
  }
  return true;
}

std::size_t ternary_length(mpz_class v) {
  std::size_t n = 0;
  for (; v > 0; v /= 3) ++n;
  return n;
}

// The digit-{0,1} integer whose ternary digits are the binary digits of j.
mpz_class digit01_unrank(const mpz_class& j) {
  mpz_class out = 0, place = 1;
  const std::size_t bits = mpz_sizeinbase(j.get_mpz_t(), 2);
  for (std::size_t b = 0; b < bits; ++b) {
    if (mpz_tstbit(j.get_mpz_t(), b)) out += place;
    place *= 3;
  }
  return out;
}

}  // namespace

MultiplierSet MultiplierSet::normalize(const std::vector<std::uint64_t>& raw) {
  if (raw.empty()) throw InvalidArgument(kModule, "empty multiplier set");
  MultiplierSet ms;
  ms.original_ = raw;
  for (auto m : raw) {
    if (m == 0) throw InvalidArgument(kModule, "multiplier 0");
    while (m % 3 == 0) m /= 3;
    ms.values_.push_back(m);
  }
  std::sort(ms.values_.begin(), ms.values_.end());
  ms.values_.erase(std::unique(ms.values_.begin(), ms.values_.end()), ms.values_.end());
  return ms;
}

MultiplierSet MultiplierSet::parse(std::string_view csv) {
  std::vector<std::uint64_t> raw;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = csv.find(',', pos);
    std::string_view item = csv.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty() || item.size() > 19 ||
        !std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ParseError(kModule, "bad multiplier list '" + std::string(csv) + "'");
    }
    raw.push_back(std::stoull(std::string(item)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return normalize(raw);
}

std::string MultiplierSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values_[i]);
  }
  return out;
}

std::size_t CarryAutomaton::edge_count() const {
  std::size_t e = 0;
  for (const auto& n : next) e += (n[0] >= 0) + (n[1] >= 0);
  return e;
}

std::string CarryAutomaton::state_label(std::size_t state) const {
  std::string out = "(";
  for (std::size_t i = 0; i < arity(); ++i) {
    if (i) out += ',';
    out += std::to_string(carry(state, i));
  }
  return out + ")";
}

CarryAutomaton build_automaton(const MultiplierSet& ms, std::size_t guard) {
  CarryAutomaton a;
  a.multipliers = ms.values();
  const std::size_t k = a.arity();
  for (auto m : a.multipliers) {
    if (m > (std::numeric_limits<std::uint64_t>::max() - 2) / 2) {
      throw InvalidArgument(kModule, "multiplier too large");
    }
  }
  std::unordered_map<std::string, std::int32_t> index;
  auto key_of = [k](const std::uint64_t* c) { return std::string(reinterpret_cast<const char*>(c), k * 8); };

  std::vector<std::uint64_t> zero(k, 0);
  a.carries = zero;
  a.next.push_back({-1, -1});
  index.emplace(key_of(zero.data()), 0);

  std::vector<std::uint64_t> nc(k);
  for (std::size_t s = 0; s < a.next.size(); ++s) {
    for (int d = 0; d < 2; ++d) {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        const std::uint64_t t = a.multipliers[i] * static_cast<std::uint64_t>(d) + a.carries[s * k + i];
        if (t % 3 == 2) ok = false;
        nc[i] = t / 3;
      }
      if (!ok) continue;
      auto [it, fresh] = index.emplace(key_of(nc.data()), static_cast<std::int32_t>(a.next.size()));
      if (fresh) {
        if (a.next.size() >= guard) {
          throw SizeGuardExceeded(kModule, "more than " + std::to_string(guard) + " states for {" +
                                               ms.to_string() + "}");
        }
        a.carries.insert(a.carries.end(), nc.begin(), nc.end());
        a.next.push_back({-1, -1});
      }
      a.next[s][d] = it->second;
    }
  }
  return a;
}

CarryAutomaton trim(const CarryAutomaton& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::int32_t>> preds(n);
  std::vector<int> outdeg(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (int d = 0; d < 2; ++d) {
      if (a.next[s][d] >= 0) {
        ++outdeg[s];
        preds[a.next[s][d]].push_back(static_cast<std::int32_t>(s));
      }
    }
  }
  std::vector<char> dead(n, 0);
  std::vector<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (outdeg[s] == 0) queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t s = queue.back();
    queue.pop_back();
    if (dead[s]) continue;
    dead[s] = 1;
    for (auto p : preds[s]) {
      // An edge p -> s may appear twice (both digits), each drops a degree.
      if (!dead[p] && --outdeg[p] == 0) queue.push_back(p);
    }
  }

  CarryAutomaton out;
  out.multipliers = a.multipliers;
  out.trimmed = true;
  std::vector<std::int32_t> remap(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (dead[s]) continue;
    remap[s] = static_cast<std::int32_t>(out.next.size());
    out.next.push_back({-1, -1});
    for (std::size_t i = 0; i < a.arity(); ++i) out.carries.push_back(a.carry(s, i));
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (dead[s]) continue;
    for (int d = 0; d < 2; ++d) {
      const auto t = a.next[s][d];
      if (t >= 0 && !dead[t]) out.next[remap[s]][d] = remap[t];
    }
  }
  out.start = static_cast<std::size_t>(remap[a.start]);
  return out;
}

bool accepts(const CarryAutomaton& a, const std::vector<Digit>& digits) {
  std::int64_t s = static_cast<std::int64_t>(a.start);
  for (auto d : digits) {
    if (d > 1) return false;
    s = a.next[s][d];
    if (s < 0) return false;
  }
  return true;
}

std::vector<mpz_class> prefix_counts(const CarryAutomaton& a, unsigned R) {
  std::vector<mpz_class> cur(a.size()), nxt(a.size());
  cur[a.start] = 1;
  std::vector<mpz_class> out{1};
  for (unsigned r = 1; r <= R; ++r) {
    for (auto& v : nxt) v = 0;
    for (std::size_t s = 0; s < a.size(); ++s) {
      if (cur[s] == 0) continue;
      for (int d = 0; d < 2; ++d) {
        if (a.next[s][d] >= 0) nxt[a.next[s][d]] += cur[s];
      }
    }
    std::swap(cur, nxt);
    mpz_class total = 0;
    for (const auto& v : cur) total += v;
    out.push_back(total);
  }
  return out;
}

mpz_class count_prefixes(const CarryAutomaton& a, unsigned r) { return prefix_counts(a, r).back(); }

mpz_class count_prefixes(const MultiplierSet& ms, unsigned r, std::size_t guard) {
  return count_prefixes(build_automaton(ms, guard), r);
}

std::vector<mpz_class> max_path_counts(const CarryAutomaton& a, unsigned R) {
  // from[s] = number of length-r paths starting at s.
  std::vector<mpz_class> from(a.size(), 1), nxt(a.size());
  std::vector<mpz_class> out{1};
  for (unsigned r = 1; r <= R; ++r) {
    mpz_class best = 0;
    for (std::size_t s = 0; s < a.size(); ++s) {
      nxt[s] = 0;
      for (int d = 0; d < 2; ++d) {
        if (a.next[s][d] >= 0) nxt[s] += from[a.next[s][d]];
      }
      if (nxt[s] > best) best = nxt[s];
    }
    std::swap(from, nxt);
    out.push_back(best);
  }
  return out;
}

bool accepts_only_zero_word(const CarryAutomaton& trimmed) {
  if (!trimmed.trimmed) throw InvalidArgument(kModule, "accepts_only_zero_word expects a trimmed machine");
  const auto& e = trimmed.next[trimmed.start];
  return trimmed.size() == 1 && e[0] == static_cast<std::int32_t>(trimmed.start) && e[1] < 0;
}

std::string to_dot(const CarryAutomaton& a) {
  std::ostringstream os;
  os << "digraph carry {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < a.size(); ++s) {
    os << "  s" << s << " [label=\"" << a.state_label(s) << "\"" << (s == a.start ? ", shape=doublecircle" : "")
       << "];\n";
  }
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (int d = 0; d < 2; ++d) {
      if (a.next[s][d] >= 0) os << "  s" << s << " -> s" << a.next[s][d] << " [label=\"" << d << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Spectral radius.

namespace {

// Strongly connected components, iterative Tarjan.
std::vector<std::vector<std::int32_t>> components(const CarryAutomaton& a) {
  const std::int32_t n = static_cast<std::int32_t>(a.size());
  std::vector<std::int32_t> idx(n, -1), low(n, 0), stack;
  std::vector<char> on(n, 0);
  std::vector<std::vector<std::int32_t>> out;
  std::int32_t counter = 0;
  struct Frame {
    std::int32_t v;
    int edge;
  };
  std::vector<Frame> call;
  for (std::int32_t root = 0; root < n; ++root) {
    if (idx[root] >= 0) continue;
    call.push_back({root, 0});
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.edge < 2) {
        const std::int32_t w = a.next[f.v][f.edge++];
        if (w < 0) continue;
        if (idx[w] < 0) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
        continue;
      }
      const std::int32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == idx[v]) {
        std::vector<std::int32_t> comp;
        std::int32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = 0;
          comp.push_back(w);
        } while (w != v);
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

struct ComponentRadius {
  mpq_class lo, hi;
  double estimate = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

// Power iteration on A + I (primitive for an irreducible A), then exact
// Collatz-Wielandt bounds min (Ax)_i/x_i <= rho <= max (Ax)_i/x_i on an
// integer rescaling of the iterate.
ComponentRadius power_radius(const std::vector<std::vector<std::int32_t>>& succ, double tol, std::size_t max_iter) {
  const std::size_t n = succ.size();
  std::vector<double> x(n, 1.0), y(n);
  ComponentRadius out;
  std::size_t it = 0;
  out.converged = false;
  while (it < max_iter) {
    for (int rep = 0; rep < 32; ++rep, ++it) {
      double mx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (auto j : succ[i]) s += x[j];
        y[i] = s;
        mx = std::max(mx, s);
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = std::max(y[i] / mx, std::numeric_limits<double>::min());
    }
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (auto j : succ[i]) s += x[j];
      rmin = std::min(rmin, s / x[i]);
      rmax = std::max(rmax, s / x[i]);
    }
    if (rmax - rmin <= tol * rmax) {
      out.converged = true;
      break;
    }
  }
  out.iterations = it;

  double xmin = *std::min_element(x.begin(), x.end());
  const int shift = 60 - std::ilogb(xmin);
  std::vector<mpz_class> X(n);
  for (std::size_t i = 0; i < n; ++i) mpz_set_d(X[i].get_mpz_t(), std::ldexp(x[i], shift));
  mpz_class lo_num, lo_den, hi_num, hi_den;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class s = 0;
    for (auto j : succ[i]) s += X[j];
    if (i == 0 || s * lo_den < lo_num * X[i]) {
      lo_num = s;
      lo_den = X[i];
    }
    if (i == 0 || s * hi_den > hi_num * X[i]) {
      hi_num = s;
      hi_den = X[i];
    }
  }
  out.lo = mpq_class(lo_num, lo_den);
  out.hi = mpq_class(hi_num, hi_den);
  out.lo.canonicalize();
  out.hi.canonicalize();
  out.estimate = 0.5 * (out.lo.get_d() + out.hi.get_d());
  return out;
}

// log_3 of a positive rational as an enclosure [lo, hi] in doubles.
std::pair<double, double> log3_bounds(const mpq_class& lo, const mpq_class& hi) {
  constexpr mpfr_prec_t bits = 128;
  const Interval ln3 = Interval::ln(3, bits);
  auto log3 = [&](const mpq_class& q) {
    return div_pos(Interval::ln(q.get_num(), bits) - Interval::ln(q.get_den(), bits), ln3);
  };
  // Division by ln 3 is only sign-safe for the nonnegative logs that occur here.
  const Interval a = log3(lo), b = log3(hi);
  double l = mpfr_get_d(a.lo().get(), MPFR_RNDD);
  double h = mpfr_get_d(b.hi().get(), MPFR_RNDU);
  return {std::max(l, 0.0), h};
}

}  // namespace

DimensionEstimate hausdorff_dimension(const MultiplierSet& ms, const DimensionOptions& opt) {
  DimensionEstimate est;
  est.multipliers = ms;
  const CarryAutomaton full = build_automaton(ms, opt.state_guard);
  est.states = full.size();
  if (opt.prefix_depth > 0) {
    auto counts = prefix_counts(full, opt.prefix_depth);
    for (unsigned r = 1; r <= opt.prefix_depth; ++r) {
      est.prefix_counts.push_back(counts[r]);
      // log_3 of an mpz: mantissa and exponent keep it finite for large counts.
      long e = 0;
      const double m = mpz_get_d_2exp(&e, counts[r].get_mpz_t());
      est.slopes.push_back((std::log(m) + e * std::log(2.0)) / std::log(3.0) / r);
    }
  }
  const CarryAutomaton a = trim(full);
  est.trimmed_states = a.size();

  std::vector<std::int32_t> comp_of(a.size(), -1);
  const auto comps = components(a);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (auto v : comps[c]) comp_of[v] = static_cast<std::int32_t>(c);
  }
  est.exact = true;
  est.rho_lo = 0;
  est.rho_hi = 0;
  est.rho = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& verts = comps[c];
    std::unordered_map<std::int32_t, std::int32_t> local;
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<std::int32_t>(i);
    std::vector<std::vector<std::int32_t>> succ(verts.size());
    std::size_t edges = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      for (int d = 0; d < 2; ++d) {
        const auto w = a.next[verts[i]][d];
        if (w >= 0 && comp_of[w] == static_cast<std::int32_t>(c)) {
          succ[i].push_back(local[w]);
          ++edges;
        }
      }
    }
    if (edges == 0) continue;  // no cycle through this vertex
    ++est.components;
    ComponentRadius r;
    if (edges == verts.size()) {
      r.lo = r.hi = 1;  // a simple cycle, or one vertex with one loop
      r.estimate = 1.0;
    } else if (verts.size() == 1) {
      r.lo = r.hi = static_cast<long>(edges);
      r.estimate = static_cast<double>(edges);
      est.positive = true;
    } else {
      est.positive = true;
      est.exact = false;
      r = power_radius(succ, opt.relative_tolerance, opt.max_iterations);
      est.iterations += r.iterations;
      est.converged = est.converged && r.converged;
    }
    if (r.lo > est.rho_lo) est.rho_lo = r.lo;
    if (r.hi > est.rho_hi) est.rho_hi = r.hi;
    est.rho = std::max(est.rho, r.estimate);
  }
  // With exact components only, the enclosure is a point.
  if (est.exact) est.rho = est.rho_hi.get_d();
  est.value = std::log(est.rho) / std::log(3.0);
  std::tie(est.lo, est.hi) = log3_bounds(est.rho_lo, est.rho_hi);
  if (est.exact && est.rho_hi == 1) est.lo = est.hi = est.value = 0.0;
  if (est.value < est.lo) est.value = est.lo;
  if (est.value > est.hi) est.value = est.hi;
  return est;
}

// ---------------------------------------------------------------------------
// Exact characteristic polynomial.

namespace {

using Poly = std::vector<mpq_class>;  // coefficient i multiplies x^i

void strip(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  strip(d);
  return d;
}

// Remainder of a / b, b nonzero; quotient stored in q when given.
Poly divmod(Poly a, const Poly& b, Poly* q = nullptr) {
  strip(a);
  if (q) q->assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (a.size() >= b.size() && !a.empty()) {
    const mpq_class f = a.back() / b.back();
    const std::size_t sh = a.size() - b.size();
    if (q) (*q)[sh] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
    a.pop_back();
    strip(a);
  }
  return a;
}

Poly gcd(Poly a, Poly b) {
  strip(a);
  strip(b);
  while (!b.empty()) {
    Poly r = divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

int sign_at(const Poly& p, const mpq_class& x) {
  mpq_class v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return sgn(v);
}

int changes(const std::vector<int>& signs) {
  int count = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

struct Sturm {
  std::vector<Poly> seq;

  explicit Sturm(const Poly& squarefree) {
    seq.push_back(squarefree);
    seq.push_back(derivative(squarefree));
    while (!seq.back().empty()) {
      Poly r = divmod(seq[seq.size() - 2], seq.back());
      for (auto& c : r) c = -c;
      if (r.empty()) break;
      seq.push_back(std::move(r));
    }
    if (seq.back().empty()) seq.pop_back();
  }
  int at(const mpq_class& x) const {
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(sign_at(p, x));
    return changes(s);
  }
  int at_infinity() const {
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(sgn(p.back()));
    return changes(s);
  }
};

}  // namespace

CharpolyResult exact_spectral_radius(const CarryAutomaton& a) {
  const std::size_t n = a.size();
  if (n > kCharpolyStateLimit) {
    throw SizeGuardExceeded(kModule, "exact characteristic polynomial limited to " +
                                         std::to_string(kCharpolyStateLimit) + " states, machine has " +
                                         std::to_string(n));
  }
  using Mat = std::vector<std::vector<mpz_class>>;
  Mat A(n, std::vector<mpz_class>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    for (int d = 0; d < 2; ++d) {
      if (a.next[s][d] >= 0) A[s][a.next[s][d]] += 1;
    }
  }
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::vector<mpz_class> c(n + 1, 0);
  c[n] = 1;
  Mat M(n, std::vector<mpz_class>(n, 0)), AM(n, std::vector<mpz_class>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) M[i][i] += c[n - k + 1];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        mpz_class s = 0;
        for (std::size_t t = 0; t < n; ++t) {
          if (A[i][t] != 0) s += A[i][t] * M[t][j];
        }
        AM[i][j] = s;
      }
    }
    mpz_class tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AM[i][i];
    mpz_class kk = static_cast<unsigned long>(k);
    mpz_divexact(c[n - k].get_mpz_t(), tr.get_mpz_t(), kk.get_mpz_t());
    c[n - k] = -c[n - k];
    std::swap(M, AM);
  }

  CharpolyResult out;
  out.coefficients = c;
  Poly p;
  for (const auto& v : c) p.push_back(mpq_class(v));
  Poly g = gcd(p, derivative(p)), sf;
  divmod(p, g, &sf);
  strip(sf);
  const Sturm st(sf);
  const int v_inf = st.at_infinity();

  auto roots_above = [&](mpq_class x) {
    // Only integers can be rational roots of a monic integer polynomial.
    if (sign_at(sf, x) == 0) x += mpq_class(1, 1 << 20);
    return st.at(x) - v_inf;
  };
  mpz_class bound = 1;
  for (const auto& v : c) bound = std::max(bound, mpz_class(abs(v)));
  mpq_class lo(1, 2), hi(bound + 1);
  if (roots_above(lo) == 0) throw Error(kModule, "no real root above 1/2");
  const mpq_class eps(1, mpz_class(1) << 96);
  while (hi - lo > eps) {
    mpq_class mid = (lo + hi) / 2;
    if (roots_above(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.root_lo = lo;
  out.root_hi = hi;

  // Small factors: x - t, or x^2 - s x + p with s = rho + rho', p = rho rho'.
  const double rho = lo.get_d();
  auto divides = [&](const Poly& f) {
    Poly r = divmod(p, f);
    return r.empty();
  };
  const mpz_class t = mpz_class(std::lround(rho));
  if (sign_at(p, mpq_class(t)) == 0 && lo <= t && t <= hi) {
    out.factor = {-t, 1};
    out.closed_form = t.get_str();
    return out;
  }
  for (long s = 0; s <= static_cast<long>(2 * rho) + 1; ++s) {
    const double pd = rho * (s - rho);
    const long pr = std::lround(pd);
    if (std::fabs(pd - pr) > 1e-6) continue;
    Poly f{mpq_class(pr), mpq_class(-s), mpq_class(1)};
    // The larger root of f must lie in (lo, hi].
    if (!(sign_at(f, lo) < 0 && sign_at(f, hi) > 0)) continue;
    if (!divides(f)) continue;
    out.factor = {mpz_class(pr), mpz_class(-s), mpz_class(1)};
    const long disc = s * s - 4 * pr;
    out.closed_form = "(" + std::to_string(s) + "+sqrt(" + std::to_string(disc) + "))/2";
    break;
  }
  return out;
}

// ---------------------------------------------------------------------------

GreedyResult greedy_element(std::uint64_t M, unsigned r, bool backtrack) {
  if (M % 3 != 1) throw InvalidArgument(kModule, "greedy_element needs M = 1 mod 3, got " + std::to_string(M));
  if (r == 0) throw InvalidArgument(kModule, "greedy_element needs r >= 1");
  GreedyResult out;
  // carry[i] is the carry of M * prefix before digit i; tried[i] the next digit to try.
  std::vector<std::uint64_t> carry(r + 1, 0);
  std::vector<int> tried(r, 0);
  std::vector<Digit> d(r, 0);
  std::size_t i = 0;
  d[0] = 1;
  tried[0] = 2;  // d_0 = 1 is fixed
  auto step = [&](std::size_t pos, int digit) -> bool {
    const std::uint64_t t = M * static_cast<std::uint64_t>(digit) + carry[pos];
    if (t % 3 == 2) return false;
    carry[pos + 1] = t / 3;
    return true;
  };
  if (!step(0, 1)) return out;  // M = 1 mod 3, never happens
  i = 1;
  while (i < r) {
    bool placed = false;
    while (tried[i] < 2) {
      const int digit = tried[i]++;
      if (step(i, digit)) {
        d[i] = static_cast<Digit>(digit);
        placed = true;
        break;
      }
    }
    if (placed) {
      ++i;
      continue;
    }
    if (!backtrack) return out;
    tried[i] = 0;
    ++out.backtracks;
    if (--i == 0) return out;
  }
  out.found = true;
  out.digits = d;
  const TernaryNat prefix = TernaryNat::from_digits(d);
  const TernaryNat product = mul_small(prefix, M);
  out.verified = omits_digit(prefix, 2) && omits_digit(product.low_digits(r), 2) && prefix.digit(0) == 1;
  return out;
}

MultipleSearch search_digit2free_multiple(const MultiplierSet& ms, const mpz_class& n_max) {
  MultipleSearch out;
  for (mpz_class j = 1;; ++j) {
    const mpz_class N = digit01_unrank(j);
    if (N > n_max) break;
    ++out.examined;
    bool ok = true;
    std::vector<mpz_class> prods;
    for (auto m : ms.values()) {
      mpz_class p = N * mpz_class(static_cast<unsigned long>(m));
      if (!omits_two(p)) {
        ok = false;
        break;
      }
      prods.push_back(p);
    }
    if (!ok) continue;
    out.N = N;
    out.products = prods;
    out.digits = ternary_length(prods.back());
    out.bound = std::log(2.0) / std::log(3.0) / static_cast<double>(out.digits);
    break;
  }
  return out;
}

MultipleExistence digit2free_multiple_exists(const MultiplierSet& ms, std::size_t guard) {
  const CarryAutomaton a = build_automaton(ms, guard);
  const std::size_t n = a.size();
  // Node 2s + f: state s, f = a digit 1 has been read.
  std::vector<std::int64_t> parent(2 * n, -2);
  std::vector<Digit> via(2 * n, 0);
  std::deque<std::size_t> queue{2 * a.start};
  parent[2 * a.start] = -1;
  auto flushes_clean = [&](std::size_t s) {
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (!omits_two(a.carry(s, i))) return false;
    }
    return true;
  };
  MultipleExistence out;
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    const std::size_t s = node / 2;
    if (node % 2 == 1 && flushes_clean(s)) {
      std::vector<Digit> digits;
      for (std::int64_t v = static_cast<std::int64_t>(node); parent[v] >= 0; v = parent[v]) digits.push_back(via[v]);
      mpz_class N = 0;
      for (auto d : digits) N = 3 * N + d;  // collected most significant first
      out.exists = true;
      out.witness = N;
      return out;
    }
    for (int d = 0; d < 2; ++d) {
      const auto t = a.next[s][d];
      if (t < 0) continue;
      const std::size_t nn = 2 * static_cast<std::size_t>(t) + ((node % 2) | d);
      if (parent[nn] != -2) continue;
      parent[nn] = static_cast<std::int64_t>(node);
      via[nn] = static_cast<Digit>(d);
      queue.push_back(nn);
    }
  }
  return out;
}

SigmaSubsetReport verify_sigma_subsets(unsigned r) {
  if (r < 6 || r > 36 || r % 6 != 0) throw InvalidArgument(kModule, "r must be a multiple of 6 in [6, 36]");
  SigmaSubsetReport rep;
  rep.r = r;
  const double log3_2 = std::log(2.0) / std::log(3.0);
  rep.a_bound = log3_2 / 2;
  rep.b_bound = log3_2 / 6;
  auto check = [r](const CarryAutomaton& a, unsigned period, std::uint64_t& strings, std::uint64_t& accepted) {
    const unsigned free = r / period;
    std::vector<Digit> digits(r, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free); ++mask) {
      for (unsigned b = 0; b < free; ++b) digits[b * period] = (mask >> b) & 1;
      ++strings;
      if (accepts(a, digits)) ++accepted;
    }
  };
  check(trim(build_automaton(MultiplierSet::normalize({1, 4}))), 2, rep.a_strings, rep.a_accepted);
  check(trim(build_automaton(MultiplierSet::normalize({1, 4, 256}))), 6, rep.b_strings, rep.b_accepted);
  return rep;
}

ScanReport scan_problems(std::uint64_t X, unsigned threads, std::uint64_t limit, std::uint64_t search_bound) {
  if (X > limit) {
    throw InvalidArgument(kModule, "scan bound " + std::to_string(X) + " exceeds limit " + std::to_string(limit));
  }
  ScanReport rep;
  rep.bound = X;
  for (std::uint64_t M = 1; M <= X; ++M) {
    if (M % 3 == 0) continue;
    ScanRow row;
    row.M = M;
    rep.rows.push_back(row);
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < rep.rows.size();) {
      ScanRow& row = rep.rows[i];
      const auto ms = MultiplierSet::normalize({1, row.M});
      const auto est = hausdorff_dimension(ms);
      row.lo = est.lo;
      row.hi = est.hi;
      row.in_h = est.lo > 0.0;
      row.positive = est.positive;
      const auto single = MultiplierSet::normalize({row.M});
      const auto ex = digit2free_multiple_exists(single);
      row.in_c = ex.exists;
      row.witness = ex.witness;
      row.search_N = search_digit2free_multiple(single, search_bound).N;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  rep.consistent = true;
  for (const auto& row : rep.rows) {
    rep.count_c += row.in_c;
    rep.count_h += row.in_h;
    if (row.in_h && !row.in_c) rep.in_h_not_c.push_back(row.M);
    if (row.in_h != row.positive || (row.in_c && !row.in_h) || (row.search_N && !row.in_c)) rep.consistent = false;
  }
  return rep;
}

}  // namespace ternary
