#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dpc/instance.hpp"

namespace dpc {

// Instance JSON schema:
//   { "num_users": M, "num_tx_antennas": nT,
//     "rate_targets": [r1, ...],
//     "channels": [[[re, im], ...], ...] }
nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

}  // namespace dpc
