// game.hpp
// Monte Carlo guessing protocols. Alice encodes a uniformly random bit in
// a photon; a binary symmetric side channel with crossover epsilon leaks
// the bit to Bob; Bob tries to name the detector that will fire. The
// scenarios differ in Alice's encoding and in what Bob may do with his
// apparatus before the photon arrives.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "qpol/polarization.hpp"
#include "qpol/rng.hpp"

namespace qpol {

enum class Scenario {
    // H/V mixture, Bob fixed to the H/V analyzer. Side information wins.
    FixedBasisHvMix,
    // +-45 degree mixture, Bob still fixed to H/V. Side information is
    // worthless; every outcome is a fair coin.
    FixedBasisDiagMix,
    // +-45 degree mixture, Bob rotates his analyzer onto the state his
    // information names and guesses the matching detector.
    FreeBasisWithInfo,
    // Time-bin entangled photon, Bob restricted to polarization-only
    // unitaries at a preset direction. The reduced state is maximally
    // mixed, so no direction and no information helps.
    EntangledRestricted,
    // Same photon, but Bob undoes the per-bin schedule before his
    // analyzer; every detection lands in D0.
    EntangledRecovery,
};

struct ScenarioConfig {
    Scenario scenario = Scenario::FixedBasisHvMix;
    double side_channel_flip_prob = 0.0;  // BSC crossover, in [0, 1/2]
    MeasurementDirection bob_direction{0.0, 0.0};  // EntangledRestricted preset
    double theta_phase = 0.0;  // relative phase of the time-bin input
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

// [row][col] = [Alice's bit][detector or guess index].
using JointCounts = std::array<std::array<std::uint64_t, 2>, 2>;

struct GameReport {
    double p_win_hat;
    double std_err;  // sqrt(p(1-p)/n) plug-in
    JointCounts counts;        // Alice bit x fired detector
    JointCounts guess_counts;  // Alice bit x Bob's guess
    double mutual_info_bits;   // plug-in estimate over guess_counts
    std::optional<double> theoretical_p_win;
};

// Deterministic given cfg: per-trial randomness comes from child seed
// (cfg.seed, "trial", index), so partitioning the trial range cannot
// change the aggregate counts.
GameReport run_game(const ScenarioConfig& cfg);

// Plug-in mutual information of the empirical joint, in bits, with the
// 0 log 0 = 0 convention. Total count must be >= 1.
double mutual_information_bits(const JointCounts& counts);

// Closed-form win probability where one exists for the scenario.
std::optional<double> theoretical_pwin(const ScenarioConfig& cfg);

const char* to_string(Scenario s);
Scenario scenario_from_string(std::string_view name);  // throws NameError

}  // namespace qpol
