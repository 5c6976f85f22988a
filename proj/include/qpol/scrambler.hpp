// scrambler.hpp
// Time-varying polarization unitaries in two regimes. Per-pulse: one
// unitary per emitted photon, which only mixes the ensemble (classical
// ignorance, every sample stays pure). Per-bin: the unitary changes
// between the early and late time bins of a single photon, which
// entangles polarization with arrival time and genuinely depolarizes.

#pragma once

#include <cstdint>
#include <vector>

#include "qpol/polarization.hpp"
#include "qpol/qcore.hpp"
#include "qpol/rng.hpp"

namespace qpol {

inline const char* kTimeLabel = "time";

// One 2x2 polarization unitary per time bin, in bin order.
class TimeSchedule {
public:
    explicit TimeSchedule(std::vector<UnitaryOp> bins);

    std::size_t size() const { return bins_.size(); }
    const UnitaryOp& bin(std::size_t k) const { return bins_.at(k); }

private:
    std::vector<UnitaryOp> bins_;
};

enum class ScramblerKind { PerPulse, PerBin };
enum class SamplerKind { IxCoinflip, Haar, Fixed };

struct ScramblerMode {
    ScramblerKind kind;
    SamplerKind sampler;
    // Consulted only when sampler == Fixed. Per-pulse uses bin 0.
    std::vector<UnitaryOp> fixed;
};

struct EnsembleReport {
    DensityOperator mean_density;
    std::uint64_t n;
    double min_sample_dop;  // each sample is pure, so these sit at 1
    double max_sample_dop;
    double classical_dop_of_mean;  // Stokes DOP of the averaged state
};

// (1/sqrt2)(|early> + e^{i theta}|late>) tensor |H>, layout [time(2), pol(2)].
PureState timebin_input(double theta_phase);

// Bin k's polarization amplitudes transformed by sched.bin(k); acts
// block-diagonally in the time index, so time populations are untouched.
PureState apply_schedule(const PureState& psi, const TimeSchedule& sched);

// [[cos a, -sin a],[sin a, cos a]], a in [0, pi/2]. <H|U|H> = cos a.
UnitaryOp partial_flip(double alpha);

// Haar-distributed 2x2 unitary. Consumes exactly four uniforms from rng
// in a fixed order, so a given seed always yields the same matrix.
UnitaryOp haar_random_unitary(RandomSource& rng);

// n per-pulse samples U_i |base>, one child seed per sample index.
EnsembleReport per_pulse_ensemble(const PureState& base,
                                  const ScramblerMode& mode, std::uint64_t n,
                                  const RandomSource& rng);

UnitaryOp pol_identity();
UnitaryOp pol_flip();
TimeSchedule identity_flip_schedule();  // {I, X}: the maximally entangling pair

}  // namespace qpol
