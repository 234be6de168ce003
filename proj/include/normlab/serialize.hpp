#pragma once

#include <json.hpp>

#include "normlab/certify.hpp"
#include "normlab/fenchel.hpp"
#include "normlab/quadratic.hpp"
#include "normlab/rademacher.hpp"
#include "normlab/spaces.hpp"

namespace normlab {

/// All reports use ordered JSON so that identical runs serialize to
/// identical bytes.
using json = nlohmann::ordered_json;

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const json& j);
Eigen::MatrixXd matrix_from_json(const json& j);

/// Space descriptors: {"dim": n, "kind": "p", "p": 1.5},
/// {"dim": n, "kind": "weighted-p", "p": 2, "weights": [...]},
/// {"kind": "quadratic", "matrix": [[...]]}. p = inf serializes as "inf".
json to_json(const NormedSpace& space);
NormedSpace space_from_json(const json& j);

json to_json(const VectorFamily& family);
VectorFamily family_from_json(const json& j);

json to_json(const GridFunction& grid);
GridFunction grid_from_json(const json& j);

json to_json(const Witness& witness);
json to_json(const CertifiedConstants& constants);
json to_json(const RademacherReport& report);
json to_json(const InnerProductCertificate& cert);
json to_json(const ConditioningResult& result);
json to_json(const ConvexityCheck& check);

}  // namespace normlab
