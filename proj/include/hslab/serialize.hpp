#pragma once

#include <json.hpp>

#include "hslab/analysis.hpp"
#include "hslab/hls.hpp"
#include "hslab/solver.hpp"

namespace hslab {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const SystemParams& p);
SystemParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RadialField& f);
RadialField field_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolutionBundle& b);
SolutionBundle bundle_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DerivedExponents& d);
nlohmann::json to_json(const Regime& r);
nlohmann::json to_json(const RateReport& r);
nlohmann::json to_json(const AsymptoticConstants& a);
nlohmann::json to_json(const PohozaevReport& p);
nlohmann::json to_json(const std::vector<IntegrabilityRow>& rows);
nlohmann::json to_json(const BoundReport& b);
nlohmann::json to_json(const IndexCheck& c);

} // namespace hslab
