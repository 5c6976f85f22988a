#include "qpol/game.hpp"

#include <cmath>
#include <string>

#include "qpol/dopcalc.hpp"
#include "qpol/errors.hpp"
#include "qpol/qcore.hpp"
#include "qpol/scrambler.hpp"

namespace qpol {

namespace {

const double kPi = 3.14159265358979323846;

// Everything needed inside the trial loop, resolved up front. q0/q1 are the
// Born weights of the two detectors; d0 is favored when renormalizing, so
// an exactly dark detector can never fire through rounding alone.
struct TrialTables {
    double q0[2][2];  // [alice bit][bob's information]
    double q1[2][2];
    int guess[2];  // detector Bob names, by information bit
};

ComplexMatrix pol_projector_on(const PureState& total, const MeasurementDirection& d) {
    ComplexMatrix p = projector(direction_ket(d));
    if (total.dim() == 2) return p;
    // layout [time, pol]: time factor is most significant
    const std::size_t dt = total.dim() / 2;
    return tensor_op(ComplexMatrix::identity(dt), p);
}

void fill_detector_weights(TrialTables& t, int a, int info,
                           const PureState& alice_state,
                           const MeasurementDirection& bob_dir) {
    const DensityOperator rho = density_of(alice_state);
    const MeasurementDirection opposite(kPi - bob_dir.theta(), bob_dir.phi() + kPi);
    t.q0[a][info] = born_probability(rho, pol_projector_on(alice_state, bob_dir));
    t.q1[a][info] = born_probability(rho, pol_projector_on(alice_state, opposite));
}

TrialTables build_tables(const ScenarioConfig& cfg) {
    TrialTables t{};
    const MeasurementDirection hv(0.0, 0.0);
    const MeasurementDirection diag0(0.5 * kPi, 0.0);
    const MeasurementDirection diag1(0.5 * kPi, kPi);

    switch (cfg.scenario) {
        case Scenario::FixedBasisHvMix: {
            const PureState s0 = named_state(NamedPolState::H);
            const PureState s1 = named_state(NamedPolState::V);
            for (int info = 0; info < 2; ++info) {
                fill_detector_weights(t, 0, info, s0, hv);
                fill_detector_weights(t, 1, info, s1, hv);
                t.guess[info] = info;
            }
            break;
        }
        case Scenario::FixedBasisDiagMix: {
            const PureState s0 = direction_ket(diag0);
            const PureState s1 = direction_ket(diag1);
            for (int info = 0; info < 2; ++info) {
                fill_detector_weights(t, 0, info, s0, hv);
                fill_detector_weights(t, 1, info, s1, hv);
                t.guess[info] = info;
            }
            break;
        }
        case Scenario::FreeBasisWithInfo: {
            const PureState s0 = direction_ket(diag0);
            const PureState s1 = direction_ket(diag1);
            // Bob's analyzer follows his information; he always names D0.
            fill_detector_weights(t, 0, 0, s0, diag0);
            fill_detector_weights(t, 1, 0, s1, diag0);
            fill_detector_weights(t, 0, 1, s0, diag1);
            fill_detector_weights(t, 1, 1, s1, diag1);
            t.guess[0] = 0;
            t.guess[1] = 0;
            break;
        }
        case Scenario::EntangledRestricted: {
            const TimeSchedule sched = identity_flip_schedule();
            const PureState s0 =
                apply_schedule(timebin_input(cfg.theta_phase), sched);
            const PureState s1 =
                apply_schedule(timebin_input(cfg.theta_phase + kPi), sched);
            for (int info = 0; info < 2; ++info) {
                fill_detector_weights(t, 0, info, s0, cfg.bob_direction);
                fill_detector_weights(t, 1, info, s1, cfg.bob_direction);
            }
            // Likelier detector under the state his information names,
            // ties toward D0. The reduced state is maximally mixed, so
            // this is always D0 up to rounding; the rule matters only if
            // the schedule is replaced by a partial flip.
            for (int info = 0; info < 2; ++info) {
                const double w0 = t.q0[info][info];
                const double w1 = t.q1[info][info];
                t.guess[info] = w0 >= w1 ? 0 : 1;
            }
            break;
        }
        case Scenario::EntangledRecovery: {
            const TimeSchedule sched = identity_flip_schedule();
            // Bob undoes the schedule (X^2 = I) before his H/V analyzer.
            const PureState b0 = apply_schedule(
                apply_schedule(timebin_input(cfg.theta_phase), sched), sched);
            const PureState b1 = apply_schedule(
                apply_schedule(timebin_input(cfg.theta_phase + kPi), sched), sched);
            for (int info = 0; info < 2; ++info) {
                fill_detector_weights(t, 0, info, b0, hv);
                fill_detector_weights(t, 1, info, b1, hv);
                t.guess[info] = 0;
            }
            break;
        }
    }
    return t;
}

}  // namespace

GameReport run_game(const ScenarioConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    const double eps = cfg.side_channel_flip_prob;
    if (!(eps >= 0.0 && eps <= 0.5)) {
        throw ConfigError("side channel flip probability must be in [0, 1/2]");
    }

    const TrialTables t = build_tables(cfg);
    const RandomSource master(cfg.seed);

    JointCounts counts{};
    JointCounts guess_counts{};
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < cfg.trials; ++i) {
        RandomSource trial = master.child("trial", i);
        const int a = trial.uniform() < 0.5 ? 0 : 1;
        const int info = (trial.uniform() < eps) ? 1 - a : a;
        const double u = trial.uniform();
        // Renormalized two-outcome Born sampling: u*(q0+q1) < q0. A weight
        // of exactly zero then never fires, whatever rounding left in the
        // other weight.
        const double q0 = t.q0[a][info];
        const double q1 = t.q1[a][info];
        const int d = (u * (q0 + q1) < q0) ? 0 : 1;
        const int g = t.guess[info];
        counts[a][d] += 1;
        guess_counts[a][g] += 1;
        if (g == d) ++wins;
    }

    GameReport rep;
    rep.p_win_hat = double(wins) / double(cfg.trials);
    rep.std_err =
        std::sqrt(rep.p_win_hat * (1.0 - rep.p_win_hat) / double(cfg.trials));
    rep.counts = counts;
    rep.guess_counts = guess_counts;
    rep.mutual_info_bits = mutual_information_bits(guess_counts);
    rep.theoretical_p_win = theoretical_pwin(cfg);
    return rep;
}

double mutual_information_bits(const JointCounts& counts) {
    std::uint64_t total = 0;
    for (const auto& row : counts)
        for (std::uint64_t c : row) total += c;
    if (total == 0) throw ConfigError("mutual information needs at least one count");

    double pa[2] = {0, 0}, pb[2] = {0, 0};
    double joint[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            joint[a][b] = double(counts[a][b]) / double(total);
            pa[a] += joint[a][b];
            pb[b] += joint[a][b];
        }
    double mi = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            if (joint[a][b] <= 0.0) continue;  // 0 log 0 = 0
            mi += joint[a][b] * std::log2(joint[a][b] / (pa[a] * pb[b]));
        }
    return mi > 0.0 ? mi : 0.0;  // the estimator is nonnegative; kill rounding dust
}

std::optional<double> theoretical_pwin(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::FixedBasisHvMix:
            return 1.0 - cfg.side_channel_flip_prob;
        case Scenario::FixedBasisDiagMix:
            return 0.5;
        case Scenario::FreeBasisWithInfo:
            return 1.0 - cfg.side_channel_flip_prob;
        case Scenario::EntangledRestricted:
            return 0.5;
        case Scenario::EntangledRecovery:
            return 1.0;
    }
    return std::nullopt;
}

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::FixedBasisHvMix: return "FIXED_BASIS_HV_MIX";
        case Scenario::FixedBasisDiagMix: return "FIXED_BASIS_DIAG_MIX";
        case Scenario::FreeBasisWithInfo: return "FREE_BASIS_WITH_INFO";
        case Scenario::EntangledRestricted: return "ENTANGLED_RESTRICTED";
        case Scenario::EntangledRecovery: return "ENTANGLED_RECOVERY";
    }
    return "?";
}

Scenario scenario_from_string(std::string_view name) {
    if (name == "FIXED_BASIS_HV_MIX") return Scenario::FixedBasisHvMix;
    if (name == "FIXED_BASIS_DIAG_MIX") return Scenario::FixedBasisDiagMix;
    if (name == "FREE_BASIS_WITH_INFO") return Scenario::FreeBasisWithInfo;
    if (name == "ENTANGLED_RESTRICTED") return Scenario::EntangledRestricted;
    if (name == "ENTANGLED_RECOVERY") return Scenario::EntangledRecovery;
    throw NameError("unknown scenario: " + std::string(name));
}

}  // namespace qpol
