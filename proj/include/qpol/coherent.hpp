// coherent.hpp
// Two-photon singlet-projection test. Any two photons in the same pure
// polarization state have exactly zero overlap with the antisymmetric
// singlet, so a nonzero singlet rate witnesses that the source is not
// just per-pulse scrambled. A triplet-subspace pair also scores zero,
// which is the known false negative of this test; the per-Bell-state
// probabilities are exposed so a caller can build a stricter check.

#pragma once

#include <cstdint>
#include <optional>

#include "qpol/qcore.hpp"
#include "qpol/rng.hpp"

namespace qpol {

inline constexpr double kSingletVerdictThreshold = 1e-10;

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

enum class BeamVerdict { PolarizedPerPulse, UnpolarizedConsistent };

struct BeamTestReport {
    double mean_singlet_probability;
    std::uint64_t n;
    BeamVerdict verdict;
};

// (|HV> - |VH>)/sqrt2 on layout [pol_a(2), pol_b(2)].
PureState singlet_state();
PureState bell_state(BellKind which);

// Born probability of projecting onto the singlet. The pure-pair overload
// goes through the overlap amplitude, which cancels exactly for identical
// factors.
double singlet_projection_probability(const DensityOperator& pair);
double singlet_projection_probability(const PureState& pair);

double bell_projection_probability(const DensityOperator& pair, BellKind which);

// Pair sources for the beam test.
class PairSampler {
public:
    enum class Kind { IdenticalPure, Product, IndependentMixed, Bell };

    // Haar-random pure qubit, emitted twice per pair.
    static PairSampler identical_pure();
    // Fixed pure single-qubit states a and b.
    static PairSampler product(PureState a, PureState b);
    // Both photons maximally mixed and uncorrelated: the pair is I/4.
    static PairSampler independent_mixed();
    static PairSampler bell(BellKind which);

    Kind kind() const { return kind_; }

    // Singlet probability of one drawn pair; deterministic samplers do not
    // consume randomness.
    double sample_probability(RandomSource& rng) const;

private:
    explicit PairSampler(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::optional<PureState> a_, b_;
    BellKind bell_ = BellKind::PsiMinus;
};

// Mean singlet probability over n pairs, one child seed per pair index.
// Verdict PolarizedPerPulse iff the mean is at or below the threshold.
BeamTestReport beam_test(const PairSampler& sampler, std::uint64_t n,
                         const RandomSource& rng);

const char* to_string(BellKind k);
const char* to_string(BeamVerdict v);

}  // namespace qpol
