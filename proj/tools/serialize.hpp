#pragma once

#include <string>

#include <json.hpp>

#include "ternary/acceptance.hpp"
#include "ternary/automaton.hpp"
#include "ternary/construction.hpp"
#include "ternary/leading.hpp"
#include "ternary/sieve.hpp"
#include "ternary/three_gap.hpp"

namespace cli {

using json = nlohmann::ordered_json;

// Exact integers leave as decimal strings; digit strings most significant first.
std::string dec(const mpz_class& v);
std::string frac(const mpq_class& v);

json to_json(const ternary::SieveReport& r);
json to_json(const ternary::CFExpansion& cf, const std::vector<ternary::ConvergentCheck>& checks,
             const std::vector<ternary::GrowthRow>& growth);
json to_json(const ternary::GapSpectrum& g);
json to_json(const ternary::CensusReport& r);
json to_json(const ternary::LkResult& r);
json to_json(const ternary::ConstructionReport& r);
json to_json(const ternary::DimensionEstimate& d);
json to_json(const ternary::CharpolyResult& c);
json to_json(const ternary::MultipleSearch& s);
json to_json(const ternary::ScanReport& r);
json to_json(const ternary::CarryAutomaton& a);
json to_json(const ternary::CriterionResult& r, bool timing);

// CSV bodies, header line first.
std::string to_csv(const ternary::SieveReport& r);
std::string to_csv(const ternary::CFExpansion& cf, const std::vector<ternary::ConvergentCheck>& checks,
                   const std::vector<ternary::GrowthRow>& growth);
std::string to_csv(const ternary::GapSpectrum& g);
std::string to_csv(const ternary::CensusReport& r);
std::string to_csv(const ternary::ConstructionReport& r);
std::string to_csv(const ternary::DimensionEstimate& d);
std::string to_csv(const ternary::MultiplierSet& ms, const ternary::MultipleSearch& s);
std::string to_csv(const ternary::ScanReport& r);
std::string to_csv(const std::vector<ternary::CriterionResult>& rs, bool timing);

}  // namespace cli
