#include "serialize.hpp"

#include <cstdio>
#include <sstream>

namespace cli {

using namespace ternary;

std::string dec(const mpz_class& v) { return v.get_str(10); }

std::string frac(const mpq_class& v) { return v.get_str(10); }

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json strings(const std::vector<mpz_class>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(dec(x));
  return a;
}

const char* yes(bool b) { return b ? "true" : "false"; }

// Quotes a CSV field when needed.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

json to_json(const SieveReport& r) {
  json j;
  j["bound"] = r.bound;
  j["lambda"] = r.lambda.to_string();
  j["residue_depth"] = r.residue_depth;
  j["survivors"] = r.survivors;
  j["counts_per_k"] = r.counts_per_k;
  j["count_n_ge_1"] = r.count_n_ge_1;
  j["narkiewicz_ok"] = r.narkiewicz_ok ? json(*r.narkiewicz_ok) : json(nullptr);
  j["work_units"] = r.work_units;
  return j;
}

json to_json(const CFExpansion& cf, const std::vector<ConvergentCheck>& checks, const std::vector<GrowthRow>& growth) {
  json j;
  j["depth"] = cf.last_index();
  j["certified_bits"] = cf.certified_bits();
  j["quotients"] = strings(cf.quotients());
  json rows = json::array();
  for (long i = 0; i <= cf.last_index(); ++i) {
    json row;
    row["index"] = i;
    row["a"] = dec(cf.a(i));
    row["p"] = dec(cf.p(i));
    row["q"] = dec(cf.q(i));
    for (const auto& c : checks) {
      if (c.index != i) continue;
      row["side"] = c.side > 0 ? "above" : "below";
      row["side_exact"] = c.exact;
      row["alternates"] = c.alternates;
      row["within_1/q^2"] = c.approximation_ok;
    }
    for (const auto& g : growth) {
      if (g.index == i) row["growth_ok"] = g.ok;
    }
    rows.push_back(row);
  }
  j["convergents"] = rows;
  return j;
}

json to_json(const GapSpectrum& g) {
  json j;
  j["N"] = g.N;
  j["bits"] = g.bits;
  if (g.n >= 0) {
    j["convergent_index"] = g.n;
    j["j"] = g.j;
    j["k"] = g.k;
  }
  json ls = json::array();
  for (std::size_t i = 0; i < g.lengths.size(); ++i) {
    json l;
    l["fixed"] = dec(g.lengths[i]);
    l["value"] = g.length(i);
    l["multiplicity"] = g.multiplicities[i];
    ls.push_back(l);
  }
  j["lengths"] = ls;
  j["distinct"] = g.distinct();
  if (g.lengths.size() == 3) j["largest_is_sum"] = g.lengths[2] == g.lengths[0] + g.lengths[1];
  return j;
}

json to_json(const CensusReport& r) {
  json j;
  j["lambda"] = r.lambda.to_string();
  j["bound"] = r.bound;
  j["convergent_index"] = r.l;
  j["q_prev"] = dec(r.q_prev);
  j["k"] = r.k;
  j["block_length"] = r.block_length;
  j["count"] = r.count;
  j["exact_count"] = r.exact_count;
  j["per_block"] = r.per_block;
  j["max_per_block"] = r.max_per_block;
  j["block_bound"] = r.block_bound;
  j["blocks_ok"] = r.blocks_ok;
  j["digit2free_prefixes"] = r.digit2free_prefixes;
  j["prefix_count_bound"] = r.prefix_count_bound;
  j["within_prefix_count_bound"] = r.within_prefix_count_bound;
  j["power_bound"] = r.power_bound;
  j["within_power_bound"] = r.within_power_bound;
  return j;
}

json to_json(const LkResult& r) {
  json j;
  j["k"] = r.k;
  j["m_prev"] = r.m_prev;
  j["threshold_exponent"] = r.threshold_exponent;
  j["l"] = dec(r.l);
  j["r"] = dec(r.r);
  j["frac_upper"] = r.frac_upper;
  j["cf_depth"] = r.cf_depth;
  j["exhaustive"] = r.exhaustive;
  j["scanned_below"] = r.scanned_below;
  j["growth_bound_ok"] = r.growth_bound_ok;
  if (r.leading_zeros) j["leading_zeros"] = *r.leading_zeros;
  j["zeros_needed"] = r.zeros_needed;
  if (r.leading_ok) j["leading_ok"] = *r.leading_ok;
  return j;
}

json to_json(const ConstructionReport& r) {
  json j;
  j["levels_requested"] = r.levels_requested;
  j["levels_built"] = r.levels_built;
  j["d0"] = dec(r.d0);
  j["digit_policy"] = r.policy.to_string();
  json levels = json::array();
  for (const auto& lv : r.levels) {
    json l;
    l["k"] = lv.k;
    l["search"] = to_json(lv.lk);
    l["m"] = dec(lv.m);
    l["s"] = dec(lv.s);
    l["s_matches_floor"] = lv.s_matches_floor;
    l["d"] = dec(lv.d);
    l["digit_bound"] = dec(lv.digit_bound);
    l["M"] = dec(lv.M);
    l["M_base3"] = lv.M.get_str(3);
    l["carry"] = dec(lv.carry);
    l["carry_ok"] = lv.carry_ok;
    l["digit_in_range"] = lv.p1;
    l["M_omits_1"] = lv.p2;
    l["floor_ok"] = lv.floor_ok;
    l["even"] = lv.even;
    l["half_omits_2"] = lv.half_digit2free;
    l["admissible_digits"] = dec(lv.admissible);
    l["claimed_digits"] = dec(lv.claimed);
    l["count_ok"] = lv.count_ok;
    l["violation"] = lv.violation;
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["lambda"] = r.lambda.to_string();
  j["lambda_range_ok"] = r.lambda_range_ok;
  j["interval_product_ok"] = r.product_ok;
  json unbuilt = json::array();
  for (const auto& u : r.unbuilt) unbuilt.push_back(to_json(u));
  j["unbuilt"] = unbuilt;
  if (!r.infeasible_reason.empty()) j["infeasible_reason"] = r.infeasible_reason;
  j["all_ok"] = r.all_ok();
  return j;
}

json to_json(const DimensionEstimate& d) {
  json j;
  j["multipliers"] = d.multipliers.values();
  j["states"] = d.states;
  j["trimmed_states"] = d.trimmed_states;
  j["cyclic_components"] = d.components;
  j["rho_lo"] = frac(d.rho_lo);
  j["rho_hi"] = frac(d.rho_hi);
  j["rho"] = d.rho;
  j["value"] = d.value;
  j["lo"] = d.lo;
  j["hi"] = d.hi;
  j["exact"] = d.exact;
  j["positive"] = d.positive;
  j["converged"] = d.converged;
  j["iterations"] = d.iterations;
  if (!d.prefix_counts.empty()) {
    json t = json::array();
    for (std::size_t i = 0; i < d.prefix_counts.size(); ++i) {
      t.push_back({{"r", i + 1}, {"count", dec(d.prefix_counts[i])}, {"slope", d.slopes[i]}});
    }
    j["prefix_counts"] = t;
  }
  return j;
}

json to_json(const CharpolyResult& c) {
  json j;
  j["coefficients"] = strings(c.coefficients);
  j["root_lo"] = frac(c.root_lo);
  j["root_hi"] = frac(c.root_hi);
  if (!c.factor.empty()) j["factor"] = strings(c.factor);
  if (!c.closed_form.empty()) j["closed_form"] = c.closed_form;
  return j;
}

json to_json(const MultipleSearch& s) {
  json j;
  j["examined"] = s.examined;
  if (!s.N) {
    j["N"] = nullptr;
    return j;
  }
  j["N"] = dec(*s.N);
  j["N_base3"] = s.N->get_str(3);
  json p = json::array();
  for (const auto& v : s.products) p.push_back({{"value", dec(v)}, {"base3", v.get_str(3)}});
  j["products"] = p;
  j["digits"] = s.digits;
  j["dimension_lower_bound"] = s.bound;
  return j;
}

json to_json(const ScanReport& r) {
  json j;
  j["bound"] = r.bound;
  j["count_M_C"] = r.count_c;
  j["count_M_H"] = r.count_h;
  j["in_M_H_not_M_C"] = r.in_h_not_c;
  j["consistent"] = r.consistent;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json x;
    x["M"] = row.M;
    x["lo"] = row.lo;
    x["hi"] = row.hi;
    x["in_M_H"] = row.in_h;
    x["in_M_C"] = row.in_c;
    x["witness"] = row.witness ? json(dec(*row.witness)) : json(nullptr);
    x["search_N"] = row.search_N ? json(dec(*row.search_N)) : json(nullptr);
    rows.push_back(x);
  }
  j["rows"] = rows;
  return j;
}

json to_json(const CarryAutomaton& a) {
  json j;
  j["multipliers"] = a.multipliers;
  j["trimmed"] = a.trimmed;
  j["start"] = a.start;
  json states = json::array();
  for (std::size_t s = 0; s < a.size(); ++s) {
    json st;
    st["id"] = s;
    std::vector<std::uint64_t> c;
    for (std::size_t i = 0; i < a.arity(); ++i) c.push_back(a.carry(s, i));
    st["carries"] = c;
    st["on_0"] = a.next[s][0] >= 0 ? json(a.next[s][0]) : json(nullptr);
    st["on_1"] = a.next[s][1] >= 0 ? json(a.next[s][1]) : json(nullptr);
    states.push_back(st);
  }
  j["states"] = states;
  return j;
}

json to_json(const CriterionResult& r, bool timing) {
  json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["pass"] = r.pass;
  j["detail"] = r.detail;
  if (timing) j["seconds"] = r.seconds;
  return j;
}

std::string to_csv(const SieveReport& r) {
  std::ostringstream os;
  os << "n,expansion\n";
  for (auto n : r.survivors) os << n << ',' << floor_lambda_pow2(r.lambda, n).to_string() << '\n';
  return os.str();
}

std::string to_csv(const CFExpansion& cf, const std::vector<ConvergentCheck>& checks,
                   const std::vector<GrowthRow>& growth) {
  std::ostringstream os;
  os << "index,a,p,q,side,growth_ok\n";
  for (long i = 0; i <= cf.last_index(); ++i) {
    std::string side, g;
    for (const auto& c : checks) {
      if (c.index == i) side = c.side > 0 ? "above" : "below";
    }
    for (const auto& r : growth) {
      if (r.index == i) g = yes(r.ok);
    }
    os << i << ',' << dec(cf.a(i)) << ',' << dec(cf.p(i)) << ',' << dec(cf.q(i)) << ',' << side << ',' << g << '\n';
  }
  return os.str();
}

std::string to_csv(const GapSpectrum& g) {
  std::ostringstream os;
  os << "length_fixed,length,multiplicity\n";
  for (std::size_t i = 0; i < g.lengths.size(); ++i) {
    os << dec(g.lengths[i]) << ',' << num(g.length(i)) << ',' << g.multiplicities[i] << '\n';
  }
  return os.str();
}

std::string to_csv(const CensusReport& r) {
  std::ostringstream os;
  os << "block,count,block_bound\n";
  for (std::size_t i = 0; i < r.per_block.size(); ++i) os << i << ',' << r.per_block[i] << ',' << r.block_bound << '\n';
  return os.str();
}

std::string to_csv(const ConstructionReport& r) {
  std::ostringstream os;
  os << "k,l,r,m,d,M,admissible,claimed,violation\n";
  for (const auto& lv : r.levels) {
    os << lv.k << ',' << dec(lv.lk.l) << ',' << dec(lv.lk.r) << ',' << dec(lv.m) << ',' << dec(lv.d) << ','
       << dec(lv.M) << ',' << dec(lv.admissible) << ',' << dec(lv.claimed) << ',' << field(lv.violation) << '\n';
  }
  return os.str();
}

std::string to_csv(const DimensionEstimate& d) {
  std::ostringstream os;
  os << "r,count,slope\n";
  for (std::size_t i = 0; i < d.prefix_counts.size(); ++i) {
    os << i + 1 << ',' << dec(d.prefix_counts[i]) << ',' << num(d.slopes[i]) << '\n';
  }
  return os.str();
}

std::string to_csv(const MultiplierSet& ms, const MultipleSearch& s) {
  std::ostringstream os;
  os << "multipliers,N,digits,bound\n";
  os << field(ms.to_string()) << ',' << (s.N ? dec(*s.N) : "") << ',' << (s.N ? std::to_string(s.digits) : "")
     << ',' << (s.N ? num(s.bound) : "") << '\n';
  return os.str();
}

std::string to_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "M,lo,hi,in_M_H,in_M_C,witness,search_N\n";
  for (const auto& row : r.rows) {
    os << row.M << ',' << num(row.lo) << ',' << num(row.hi) << ',' << yes(row.in_h) << ',' << yes(row.in_c) << ','
       << (row.witness ? dec(*row.witness) : "") << ',' << (row.search_N ? dec(*row.search_N) : "") << '\n';
  }
  return os.str();
}

std::string to_csv(const std::vector<CriterionResult>& rs, bool timing) {
  std::ostringstream os;
  os << "id,title,pass,detail" << (timing ? ",seconds" : "") << '\n';
  for (const auto& r : rs) {
    os << r.id << ',' << field(r.title) << ',' << yes(r.pass) << ',' << field(r.detail);
    if (timing) os << ',' << num(r.seconds);
    os << '\n';
  }
  return os.str();
}

}  // namespace cli
