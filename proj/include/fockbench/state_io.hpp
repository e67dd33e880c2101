#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "fockbench/fock.hpp"

namespace fockbench {

inline constexpr const char* kStateFormatVersion = "fockbench-state-v1";

// {"version": "fockbench-state-v1", "dim": d, "re": [[...]], "im": [[...]]}
// Doubles are written in shortest round-trip form, so load(save(x)) == x bit for bit.
nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::json& doc);

std::string dump_state(const DensityMatrix& rho);
void save_state(const DensityMatrix& rho, const std::filesystem::path& path);
DensityMatrix load_state(const std::filesystem::path& path);

}  // namespace fockbench
