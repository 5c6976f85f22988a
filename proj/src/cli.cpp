#include "qpol/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include "qpol/errors.hpp"

namespace qpol {

namespace {

using nlohmann::json;

const double kPi = 3.14159265358979323846;

// --- schema helpers ---

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
    throw ConfigError("config field '" + key + "': " + why);
}

void require_known_keys(const json& cfg, const std::set<std::string>& allowed) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("unknown config key '" + it.key() + "'");
        }
    }
}

double get_double(const json& cfg, const std::string& key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    const json& v = cfg.at(key);
    if (!v.is_number()) bad_field(key, "expected a number");
    return v.get<double>();
}

std::uint64_t get_count(const json& cfg, const std::string& key,
                        std::uint64_t fallback) {
    if (!cfg.contains(key)) return fallback;
    const json& v = cfg.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        auto s = v.get<std::int64_t>();
        if (s < 0) bad_field(key, "must be nonnegative");
        return static_cast<std::uint64_t>(s);
    }
    bad_field(key, "expected a nonnegative integer");
}

std::string get_string(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) bad_field(key, "required");
    const json& v = cfg.at(key);
    if (!v.is_string()) bad_field(key, "expected a string");
    return v.get<std::string>();
}

double parse_angle(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse angle '" + text + "'");
    }
}

PureState time_plus_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return PureState({cxd(r, 0), cxd(r, 0)},
                     SubsystemLayout::single(kTimeLabel, 2));
}

PureState inline_state(const json& spec) {
    static const std::set<std::string> allowed = {"layout", "amplitudes"};
    require_known_keys(spec, allowed);
    if (!spec.contains("layout") || !spec.at("layout").is_array()) {
        bad_field("state.layout", "expected an array of {label, dim}");
    }
    if (!spec.contains("amplitudes") || !spec.at("amplitudes").is_array()) {
        bad_field("state.amplitudes", "expected an array of [re, im] pairs");
    }
    std::vector<SubsystemFactor> factors;
    for (const json& f : spec.at("layout")) {
        if (!f.is_object() || !f.contains("label") || !f.contains("dim") ||
            !f.at("label").is_string() || !f.at("dim").is_number_integer()) {
            bad_field("state.layout", "each factor needs a label and a dim");
        }
        factors.push_back({f.at("label").get<std::string>(),
                           f.at("dim").get<std::size_t>()});
    }
    std::vector<cxd> amps;
    for (const json& a : spec.at("amplitudes")) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() ||
            !a[1].is_number()) {
            bad_field("state.amplitudes", "each amplitude is [re, im]");
        }
        amps.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    try {
        return PureState(std::move(amps), SubsystemLayout(std::move(factors)));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid inline state: ") + e.what());
    }
}

// Named states: "eq5:<theta>" (time-bin input), "eq6" / "eq6:<theta>"
// (after the {I, X} schedule), "partial:<alpha>" (after {I, partial_flip}),
// "product:<H|V|D|A|R|L>" (named polarization state against an inert
// time-bin superposition).
PureState named_config_state(const std::string& name) {
    auto after = [&](const char* prefix) -> std::string {
        return name.substr(std::string(prefix).size());
    };
    if (name.rfind("eq5:", 0) == 0) {
        return timebin_input(parse_angle(after("eq5:"), "state eq5"));
    }
    if (name == "eq6") {
        return apply_schedule(timebin_input(0.0), identity_flip_schedule());
    }
    if (name.rfind("eq6:", 0) == 0) {
        return apply_schedule(timebin_input(parse_angle(after("eq6:"), "state eq6")),
                              identity_flip_schedule());
    }
    if (name.rfind("partial:", 0) == 0) {
        const double alpha = parse_angle(after("partial:"), "state partial");
        const TimeSchedule sched({pol_identity(), partial_flip(alpha)});
        return apply_schedule(timebin_input(0.0), sched);
    }
    if (name.rfind("product:", 0) == 0) {
        return tensor_state(time_plus_state(), named_state(after("product:")));
    }
    throw NameError("unknown state spec '" + name + "'");
}

SamplerKind sampler_from_string(const std::string& s) {
    if (s == "IX_COINFLIP") return SamplerKind::IxCoinflip;
    if (s == "HAAR") return SamplerKind::Haar;
    if (s == "FIXED_IDENTITY" || s == "FIXED_FLIP") return SamplerKind::Fixed;
    throw NameError("unknown sampler '" + s + "'");
}

BellKind bell_from_string(const std::string& s) {
    if (s == "PHI_PLUS") return BellKind::PhiPlus;
    if (s == "PHI_MINUS") return BellKind::PhiMinus;
    if (s == "PSI_PLUS") return BellKind::PsiPlus;
    if (s == "PSI_MINUS") return BellKind::PsiMinus;
    throw NameError("unknown Bell state '" + s + "'");
}

// "IDENTICAL_PURE", "INDEPENDENT_MIXED", "BELL:<kind>", "PRODUCT:<a>:<b>".
PairSampler source_from_string(const std::string& s) {
    if (s == "IDENTICAL_PURE") return PairSampler::identical_pure();
    if (s == "INDEPENDENT_MIXED") return PairSampler::independent_mixed();
    if (s.rfind("BELL:", 0) == 0) {
        return PairSampler::bell(bell_from_string(s.substr(5)));
    }
    if (s.rfind("PRODUCT:", 0) == 0) {
        const std::string rest = s.substr(8);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos) {
            throw NameError("product source needs two states, e.g. PRODUCT:H:V");
        }
        return PairSampler::product(named_state(rest.substr(0, colon)),
                                    named_state(rest.substr(colon + 1)));
    }
    throw NameError("unknown pair source '" + s + "'");
}

// --- per-command parsers ---

DopCmd parse_dop(const json& cfg) {
    static const std::set<std::string> allowed = {"command", "seed",   "state",
                                                 "method",  "n_theta", "n_phi"};
    require_known_keys(cfg, allowed);
    if (!cfg.contains("state")) bad_field("state", "required");

    std::string label = "inline";
    PureState state = [&]() -> PureState {
        const json& s = cfg.at("state");
        if (s.is_string()) {
            label = s.get<std::string>();
            return named_config_state(label);
        }
        if (s.is_object()) return inline_state(s);
        bad_field("state", "expected a name or an inline object");
    }();

    DopCmd cmd{std::move(state), std::move(label)};
    if (cfg.contains("method")) {
        const std::string m = get_string(cfg, "method");
        if (m == "analytic") cmd.method = DopMethod::Analytic;
        else if (m == "grid") cmd.method = DopMethod::Grid;
        else bad_field("method", "expected 'analytic' or 'grid'");
    }
    cmd.n_theta = get_count(cfg, "n_theta", 1000);
    cmd.n_phi = get_count(cfg, "n_phi", 2000);
    return cmd;
}

GameCmd parse_game(const json& cfg, std::uint64_t seed) {
    static const std::set<std::string> allowed = {
        "command",  "seed",    "scenario",    "flip_prob",
        "trials",   "bob_theta", "bob_phi",   "theta_phase"};
    require_known_keys(cfg, allowed);
    ScenarioConfig sc;
    sc.scenario = scenario_from_string(get_string(cfg, "scenario"));
    sc.side_channel_flip_prob = get_double(cfg, "flip_prob", 0.0);
    if (!(sc.side_channel_flip_prob >= 0.0 && sc.side_channel_flip_prob <= 0.5)) {
        bad_field("flip_prob", "must be in [0, 0.5]");
    }
    sc.trials = get_count(cfg, "trials", 0);
    if (sc.trials < 1) bad_field("trials", "must be >= 1");
    const double bt = get_double(cfg, "bob_theta", 0.0);
    const double bp = get_double(cfg, "bob_phi", 0.0);
    sc.bob_direction = MeasurementDirection(bt, bp);
    sc.theta_phase = get_double(cfg, "theta_phase", 0.0);
    sc.seed = seed;
    return GameCmd{sc};
}

SweepCmd parse_sweep(const json& cfg) {
    static const std::set<std::string> allowed = {"command", "seed", "alpha_count",
                                                 "n_theta", "n_phi"};
    require_known_keys(cfg, allowed);
    SweepCmd cmd;
    cmd.alpha_count = get_count(cfg, "alpha_count", 16);
    if (cmd.alpha_count < 2) bad_field("alpha_count", "must be >= 2");
    cmd.n_theta = get_count(cfg, "n_theta", 1000);
    cmd.n_phi = get_count(cfg, "n_phi", 2000);
    return cmd;
}

EnsembleCmd parse_ensemble(const json& cfg) {
    static const std::set<std::string> allowed = {"command", "seed", "base",
                                                 "sampler", "n"};
    require_known_keys(cfg, allowed);
    EnsembleCmd cmd;
    if (cfg.contains("base")) {
        const std::string b = get_string(cfg, "base");
        // reuse the name check, then keep the enum
        named_state(b);
        if (b == "H") cmd.base = NamedPolState::H;
        else if (b == "V") cmd.base = NamedPolState::V;
        else if (b == "D") cmd.base = NamedPolState::D;
        else if (b == "A") cmd.base = NamedPolState::A;
        else if (b == "R") cmd.base = NamedPolState::R;
        else cmd.base = NamedPolState::L;
    }
    cmd.sampler_label = get_string(cfg, "sampler");
    cmd.sampler = sampler_from_string(cmd.sampler_label);
    if (cmd.sampler_label == "FIXED_FLIP") cmd.fixed_unitary = pol_flip();
    cmd.n = get_count(cfg, "n", 0);
    if (cmd.n < 1) bad_field("n", "must be >= 1");
    return cmd;
}

SingletCmd parse_singlet(const json& cfg) {
    static const std::set<std::string> allowed = {"command", "seed", "source", "n"};
    require_known_keys(cfg, allowed);
    SingletCmd cmd;
    cmd.source_label = get_string(cfg, "source");
    cmd.sampler = source_from_string(cmd.source_label);
    cmd.n = get_count(cfg, "n", 0);
    if (cmd.n < 1) bad_field("n", "must be >= 1");
    return cmd;
}

OracleCmd parse_oracle(const json& cfg) {
    static const std::set<std::string> allowed = {"command", "seed",  "states",
                                                 "n_theta", "n_phi", "time_dim"};
    require_known_keys(cfg, allowed);
    OracleCmd cmd;
    cmd.states = get_count(cfg, "states", 100);
    if (cmd.states < 1) bad_field("states", "must be >= 1");
    cmd.n_theta = get_count(cfg, "n_theta", 1000);
    cmd.n_phi = get_count(cfg, "n_phi", 2000);
    cmd.time_dim = get_count(cfg, "time_dim", 2);
    if (cmd.time_dim < 2 || cmd.time_dim > 32) {
        bad_field("time_dim", "must be in [2, 32]");
    }
    return cmd;
}

// --- payload builders ---

json dop_payload(const DopCmd& cmd) {
    const DopResult r = dop_of_state(cmd.state, cmd.method, cmd.n_theta, cmd.n_phi);
    return json{{"q_min", r.q_min},
                {"dop", r.dop},
                {"argmax_theta", r.argmax.theta()},
                {"argmax_phi", r.argmax.phi()},
                {"method", to_string(r.method)}};
}

json game_payload(const GameCmd& cmd) {
    const GameReport r = run_game(cmd.cfg);
    json counts = json::array();
    json guesses = json::array();
    for (int a = 0; a < 2; ++a) {
        counts.push_back({r.counts[a][0], r.counts[a][1]});
        guesses.push_back({r.guess_counts[a][0], r.guess_counts[a][1]});
    }
    json out{{"p_win_hat", r.p_win_hat},
             {"std_err", r.std_err},
             {"counts", counts},
             {"guess_counts", guesses},
             {"mutual_info_bits", r.mutual_info_bits},
             {"scenario", to_string(cmd.cfg.scenario)}};
    if (r.theoretical_p_win) out["theoretical_p_win"] = *r.theoretical_p_win;
    else out["theoretical_p_win"] = nullptr;
    return out;
}

json sweep_payload(const SweepCmd& cmd) {
    json rows = json::array();
    for (std::size_t i = 0; i < cmd.alpha_count; ++i) {
        const double alpha =
            0.5 * kPi * double(i) / double(cmd.alpha_count - 1);
        const TimeSchedule sched({pol_identity(), partial_flip(alpha)});
        const PureState psi = apply_schedule(timebin_input(0.0), sched);
        const DensityOperator rho = reduced_polarization(psi);
        rows.push_back({alpha, q_min_analytic(rho).dop,
                        q_min_grid(rho, cmd.n_theta, cmd.n_phi).dop});
    }
    return json{{"columns", {"alpha", "dop_analytic", "dop_grid"}},
                {"rows", rows}};
}

json density_entries(const DensityOperator& rho) {
    json rows = json::array();
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

json ensemble_payload(const EnsembleCmd& cmd, std::uint64_t seed) {
    ScramblerMode mode{ScramblerKind::PerPulse, cmd.sampler, {}};
    if (cmd.sampler == SamplerKind::Fixed) mode.fixed = {cmd.fixed_unitary};
    const RandomSource master(seed);
    const EnsembleReport r =
        per_pulse_ensemble(named_state(cmd.base), mode, cmd.n, master);
    const DensityOperator mixed(ComplexMatrix::identity(2).scaled(0.5),
                                SubsystemLayout::single(kPolLabel, 2));
    return json{{"n", r.n},
                {"sampler", cmd.sampler_label},
                {"min_sample_dop", r.min_sample_dop},
                {"max_sample_dop", r.max_sample_dop},
                {"classical_dop_of_mean", r.classical_dop_of_mean},
                {"trace_distance_to_mixed", trace_distance(r.mean_density, mixed)},
                {"mean_density", density_entries(r.mean_density)}};
}

json singlet_payload(const SingletCmd& cmd, std::uint64_t seed) {
    const RandomSource master(seed);
    const BeamTestReport r = beam_test(cmd.sampler, cmd.n, master);
    return json{{"mean_singlet_probability", r.mean_singlet_probability},
                {"n", r.n},
                {"source", cmd.source_label},
                {"verdict", to_string(r.verdict)}};
}

json oracle_payload(const OracleCmd& cmd, std::uint64_t seed) {
    const RandomSource master(seed);
    const SubsystemLayout layout(
        {{kTimeLabel, cmd.time_dim}, {kPolLabel, 2}});
    double max_gap = 0.0;
    bool grid_ok = true;
    for (std::size_t i = 0; i < cmd.states; ++i) {
        RandomSource child = master.child("oracle-state", i);
        const PureState psi = random_pure_state(layout, child);
        const DensityOperator rho = reduced_polarization(psi);
        const double qa = q_min_analytic(rho).q_min;
        const double qg = q_min_grid(rho, cmd.n_theta, cmd.n_phi).q_min;
        max_gap = std::max(max_gap, std::abs(qg - qa));
        if (qg < qa) grid_ok = false;
    }
    return json{{"states", cmd.states},
                {"time_dim", cmd.time_dim},
                {"n_theta", cmd.n_theta},
                {"n_phi", cmd.n_phi},
                {"max_abs_gap", max_gap},
                {"grid_never_below_analytic", grid_ok}};
}

// --- canonical emission ---

void canonical_dump(const json& v, std::string& out) {
    switch (v.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {  // keys sorted
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                canonical_dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ',';
                canonical_dump(v[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float:
            out += format_float(v.get<double>());
            break;
        default:
            out += v.dump();
            break;
    }
}

std::string csv_from_sweep(const json& results) {
    if (!results.contains("columns") || !results.contains("rows")) {
        throw ConfigError("CSV format is only available for tabular payloads");
    }
    std::string out;
    const json& cols = results.at("columns");
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i].get<std::string>();
    }
    out += '\n';
    for (const json& row : results.at("rows")) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_float(row[i].get<double>());
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

RunConfig parse_config(const std::string& text) {
    json cfg;
    try {
        cfg = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is the 1-based offset of the offending byte; count
        // newlines before it to recover line/column.
        std::size_t line = 1, col = 1;
        const std::size_t before = e.byte > 0 ? e.byte - 1 : 0;
        for (std::size_t i = 0; i < before && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string why = e.what();
        const std::size_t cut = why.find("] ");
        if (cut != std::string::npos) why = why.substr(cut + 2);
        // The library message already leads with its own position; strip it
        // so ParseError's prefix is the only one.
        if (why.rfind("parse error at line", 0) == 0) {
            const std::size_t colon = why.find(": ");
            if (colon != std::string::npos) why = why.substr(colon + 2);
        }
        throw ParseError(why, line, col);
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig rc;
    rc.command = get_string(cfg, "command");
    rc.seed = get_count(cfg, "seed", 0);

    if (rc.command == "dop") rc.params = parse_dop(cfg);
    else if (rc.command == "game") rc.params = parse_game(cfg, rc.seed);
    else if (rc.command == "scramble-sweep") rc.params = parse_sweep(cfg);
    else if (rc.command == "scramble-ensemble") rc.params = parse_ensemble(cfg);
    else if (rc.command == "singlet-test") rc.params = parse_singlet(cfg);
    else if (rc.command == "oracle-check") rc.params = parse_oracle(cfg);
    else throw ConfigError("unknown command '" + rc.command + "'");

    rc.echo = cfg;
    rc.echo["seed"] = rc.seed;  // the seed is always explicit in reports
    return rc;
}

Report run(const RunConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    Report rep;
    rep.config_echo = cfg.echo;
    rep.artifact_version = kArtifactVersion;

    if (const auto* c = std::get_if<DopCmd>(&cfg.params)) {
        rep.results = dop_payload(*c);
    } else if (const auto* c = std::get_if<GameCmd>(&cfg.params)) {
        rep.results = game_payload(*c);
    } else if (const auto* c = std::get_if<SweepCmd>(&cfg.params)) {
        rep.results = sweep_payload(*c);
    } else if (const auto* c = std::get_if<EnsembleCmd>(&cfg.params)) {
        rep.results = ensemble_payload(*c, cfg.seed);
    } else if (const auto* c = std::get_if<SingletCmd>(&cfg.params)) {
        rep.results = singlet_payload(*c, cfg.seed);
    } else if (const auto* c = std::get_if<OracleCmd>(&cfg.params)) {
        rep.results = oracle_payload(*c, cfg.seed);
    } else {
        throw ConfigError("config has no command payload");
    }

    rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    return rep;
}

std::string emit(const Report& rep, EmitFormat fmt) {
    if (fmt == EmitFormat::Csv) return csv_from_sweep(rep.results);
    json whole{{"artifact_version", rep.artifact_version},
               {"config_echo", rep.config_echo},
               {"results", rep.results}};
    std::string out;
    canonical_dump(whole, out);
    out += '\n';
    return out;
}

EmitFormat format_from_string(std::string_view name) {
    if (name == "json") return EmitFormat::Json;
    if (name == "csv") return EmitFormat::Csv;
    throw ConfigError("unknown format '" + std::string(name) +
                      "' (expected json or csv)");
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 1;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    return 2;
}

}  // namespace qpol
