// JSON renderings of groups and verdicts.  Objects use sorted keys, so the
// output is deterministic.
#pragma once

#include <string>
#include <vector>

#include "finsheaf/cm.hpp"
#include "finsheaf/simplicial.hpp"
#include "json.hpp"

namespace finsheaf {

using json = nlohmann::json;

/// {"rank": r, "torsion": [d1, ...]}; orders beyond 64 bits become strings.
json to_json(const FgGroup& g);
/// {"degree": group, ...}
json to_json(const GradedGroups& g);
/// {"label": graded groups, ...}
json stalks_json(const FinPoset& X, const std::vector<GradedGroups>& stalks);
json stalks_json(const PresentedSheaf& F);

json to_json(const FinPoset& X, const CmWitness& w);
json to_json(const FinPoset& X, const StructureReport& r);
json to_json(const FinPoset& X, const DualizabilityReport& r);
json to_json(const FinPoset& X, const CanonicalDescriptor& c);
json to_json(const FinPoset& X, const CmSpaceVerdict& v);
json to_json(const FinPoset& X, const CmVerdict& v);
json to_json(const FinPoset& X, const CmClosedVerdict& v);
json to_json(const OmegaReport& r);
json to_json(const FinPoset& X, const BaclawskiReport& r);
json to_json(const SimplicialComplex& K, const ReisnerVerdict& v);
json to_json(const ProductCheck& c);
json to_json(const BarycentricCheck& c);

/// "key: value" lines, nested keys joined with dots.
std::string json_to_text(const json& j);

}  // namespace finsheaf
