#pragma once

#include "eqboot/bootstrap.hpp"
#include "eqboot/groups.hpp"
#include "eqboot/operators.hpp"
#include "eqboot/theory.hpp"

#include <json.hpp>

namespace eqboot {

nlohmann::json group_descriptor(const GroupAction& action);
GroupAction group_from_descriptor(const nlohmann::json& j, Shape shape);

nlohmann::json element_to_json(const GroupElement& g);          // [dy, dx, r]
GroupElement element_from_json(const nlohmann::json& j);

/// {kind, shape, params, seed}; reconstructible via operator_from_descriptor.
nlohmann::json operator_descriptor(const LinearOperator& op);
LinearOperator operator_from_descriptor(const nlohmann::json& j);

/// {errors, elements, shape}; reconstructions go to a separate binary dump.
nlohmann::json bootstrap_result_to_json(const BootstrapResult& result);

nlohmann::json bias_report_to_json(const BiasReport& report);

}  // namespace eqboot
