// JSON and one-line renderings of every verdict the workbench produces.
#pragma once

#include "ccswb/equations.hpp"
#include "ccswb/oracle.hpp"

#include <json.hpp>

#include <string>

namespace ccswb {

using Json = nlohmann::ordered_json;

std::string trace_string(const std::vector<ActionId>& trace);
std::string family_string(const Family& f);

Json to_json(const Evidence& e, const Lts& left, const Lts& right);
Json to_json(const MustVerdict& v, const Lts& server, const Lts& client);
Json to_json(const MustScVerdict& v, const Lts& p, const Lts& r);
Json to_json(const FailingClause& c);
Json to_json(const RefinementVerdict& v);
Json to_json(const UsabilityReport& r);
Json to_json(const Lts& l);
Json to_json(const Pnf& n);
Json to_json(const Cnf& n);
Json to_json(const NfReport& r);
Json to_json(const AxiomInstance& inst, const InstanceVerdict& v);
Json to_json(const CrossSummary& s);

// "holds (exact)", "fails (bounded, k=8)" and so on.
std::string verdict_line(bool holds, Mode mode, std::optional<int> bound = std::nullopt);
std::string witness_status_name(WitnessStatus s);

// Indented multi-line rendering of a normal form.
std::string describe(const Pnf& n);
std::string describe(const Cnf& n);

}  // namespace ccswb
