// cli.hpp
// Batch front-end plumbing: JSON config parsing with strict schemas,
// command dispatch, and canonical report emission. Reports are written
// with a fixed float format and sorted keys so identical configs always
// produce byte-identical files.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "qpol/coherent.hpp"
#include "qpol/dopcalc.hpp"
#include "qpol/game.hpp"
#include "qpol/scrambler.hpp"

namespace qpol {

inline const char* kArtifactVersion = "1.0.0";

enum class EmitFormat { Json, Csv };

struct DopCmd {
    PureState state;
    std::string state_label;  // textual spec, or "inline"
    DopMethod method = DopMethod::Analytic;
    std::size_t n_theta = 1000;
    std::size_t n_phi = 2000;
};

struct GameCmd {
    ScenarioConfig cfg;
};

struct SweepCmd {
    std::size_t alpha_count = 16;  // values from 0 to pi/2 inclusive
    std::size_t n_theta = 1000;
    std::size_t n_phi = 2000;
};

struct EnsembleCmd {
    NamedPolState base = NamedPolState::V;
    SamplerKind sampler = SamplerKind::IxCoinflip;
    UnitaryOp fixed_unitary = pol_identity();  // consulted when sampler == Fixed
    std::string sampler_label;
    std::uint64_t n = 0;
};

struct SingletCmd {
    PairSampler sampler = PairSampler::identical_pure();
    std::string source_label;
    std::uint64_t n = 0;
};

struct OracleCmd {
    std::size_t states = 100;
    std::size_t n_theta = 1000;
    std::size_t n_phi = 2000;
    std::size_t time_dim = 2;
};

struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    std::variant<std::monostate, DopCmd, GameCmd, SweepCmd, EnsembleCmd,
                 SingletCmd, OracleCmd>
        params;
    // The validated config with the seed made explicit; echoed into reports
    // so a report alone reproduces its run.
    nlohmann::json echo;
};

struct Report {
    nlohmann::json config_echo;
    nlohmann::json results;
    std::string artifact_version;
    // Measured, but deliberately kept out of emitted bytes (reports must be
    // byte-reproducible); the binary prints it to stderr instead.
    double wall_time_ms = 0.0;
};

// Strict parse: malformed JSON raises ParseError with line/column; schema
// violations (wrong type, unknown key, out-of-range value) raise ConfigError.
RunConfig parse_config(const std::string& text);

Report run(const RunConfig& cfg);

// JSON: sorted keys, every float printed with 17 significant digits.
// CSV: only the sweep command has a tabular payload; other commands
// reject the format.
std::string emit(const Report& rep, EmitFormat fmt);

EmitFormat format_from_string(std::string_view name);  // throws ConfigError

// 1 config, 2 numerical, 3 I/O; anything else also 2 (defensive).
int exit_code_for(const std::exception& e);

// %.17g rendering used for every float in reports; exposed for tests.
std::string format_float(double v);

}  // namespace qpol
