#pragma once

#include <cstdint>

#include "tidecoh/config.hpp"
#include "tidecoh/result_table.hpp"

namespace tidecoh {

inline constexpr const char* kVersion = "0.1.0";

struct CommandResult {
  ResultTable table;
  bool passed = true;  // false -> exit code 1
};

// Epistemic-mixture reduced matrix vs trace over the pointer, for the
// configured scenario followed by cfg.random_sweep random ones.
CommandResult cmd_identity(const ScenarioConfig& cfg, std::uint64_t seed);

// Ensemble vs analytic off-diagonal decay on a uniform grid over [0, t_max],
// with a log-linear fit of the decay rate.
CommandResult cmd_decay(const ScenarioConfig& cfg, std::uint64_t seed);

// Screen distribution, sampled hits and envelope-corrected visibility.
CommandResult cmd_screen(const ScenarioConfig& cfg, std::uint64_t seed);

// System purity through preparation, entanglement, recoherence, and a
// recoherence attempt after actualization.
CommandResult cmd_recohere(const ScenarioConfig& cfg, std::uint64_t seed);

// Invariant sweep over random scenarios (cfg.random_sweep, default 1000).
CommandResult cmd_validate(const ScenarioConfig& cfg, std::uint64_t seed);

}  // namespace tidecoh
