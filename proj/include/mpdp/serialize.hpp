#pragma once

#include <filesystem>

#include <json.hpp>

#include "mpdp/core.hpp"

namespace mpdp {

// MDP document schema (JSON):
//   {
//     "num_states": S, "num_actions": A, "horizon": T,
//     "kernels": [ T+1 tensors, each S x A x S nested arrays (or flat, row-major) ],
//     "rewards": [ T+1 matrices, each S x A nested arrays (or flat, row-major) ]
//   }
// Doubles are written with round-trip precision.
nlohmann::json mdp_to_json(const NonStationaryMdp& mdp);
NonStationaryMdp mdp_from_json(const nlohmann::json& doc);

void save_mdp(const NonStationaryMdp& mdp, const std::filesystem::path& path);
NonStationaryMdp load_mdp(const std::filesystem::path& path);

}  // namespace mpdp
