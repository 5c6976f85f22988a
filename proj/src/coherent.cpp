#include "qpol/coherent.hpp"

#include <cmath>
#include <utility>

#include "qpol/errors.hpp"
#include "qpol/polarization.hpp"
#include "qpol/scrambler.hpp"

namespace qpol {

namespace {

SubsystemLayout pair_layout() {
    return SubsystemLayout({{"pol_a", 2}, {"pol_b", 2}});
}

void require_pair(std::size_t dim, const char* who) {
    if (dim != 4) {
        throw ShapeError(std::string(who) + " requires a two-qubit pair state");
    }
}

PureState as_pair(const PureState& a, const PureState& b) {
    return tensor_state(relabel(a, {"pol_a"}), relabel(b, {"pol_b"}));
}

}  // namespace

PureState singlet_state() { return bell_state(BellKind::PsiMinus); }

PureState bell_state(BellKind which) {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<cxd> amps(4, cxd(0, 0));
    switch (which) {
        case BellKind::PhiPlus:  amps[0] = r; amps[3] = r; break;
        case BellKind::PhiMinus: amps[0] = r; amps[3] = -r; break;
        case BellKind::PsiPlus:  amps[1] = r; amps[2] = r; break;
        case BellKind::PsiMinus: amps[1] = r; amps[2] = -r; break;
    }
    return PureState(std::move(amps), pair_layout());
}

double singlet_projection_probability(const DensityOperator& pair) {
    require_pair(pair.dim(), "singlet_projection_probability");
    return born_probability(pair, projector(singlet_state()));
}

double singlet_projection_probability(const PureState& pair) {
    require_pair(pair.dim(), "singlet_projection_probability");
    const PureState singlet = singlet_state();
    cxd ov(0, 0);
    // <singlet|pair> without layout comparison; the pair may carry any
    // two-qubit labels.
    for (std::size_t i = 0; i < 4; ++i) {
        ov += std::conj(singlet.amplitudes()[i]) * pair.amplitudes()[i];
    }
    double p = std::norm(ov);
    return p > 1.0 ? 1.0 : p;
}

double bell_projection_probability(const DensityOperator& pair, BellKind which) {
    require_pair(pair.dim(), "bell_projection_probability");
    return born_probability(pair, projector(bell_state(which)));
}

PairSampler PairSampler::identical_pure() {
    return PairSampler(Kind::IdenticalPure);
}

PairSampler PairSampler::product(PureState a, PureState b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw ShapeError("product pair sampler needs single-qubit states");
    }
    PairSampler s(Kind::Product);
    s.a_ = std::move(a);
    s.b_ = std::move(b);
    return s;
}

PairSampler PairSampler::independent_mixed() {
    return PairSampler(Kind::IndependentMixed);
}

PairSampler PairSampler::bell(BellKind which) {
    PairSampler s(Kind::Bell);
    s.bell_ = which;
    return s;
}

double PairSampler::sample_probability(RandomSource& rng) const {
    switch (kind_) {
        case Kind::IdenticalPure: {
            const PureState psi =
                apply_unitary(haar_random_unitary(rng), named_state(NamedPolState::H));
            return singlet_projection_probability(as_pair(psi, psi));
        }
        case Kind::Product:
            return singlet_projection_probability(as_pair(*a_, *b_));
        case Kind::IndependentMixed: {
            const DensityOperator quarter(ComplexMatrix::identity(4).scaled(0.25),
                                          pair_layout());
            return singlet_projection_probability(quarter);
        }
        case Kind::Bell:
            return singlet_projection_probability(bell_state(bell_));
    }
    return 0.0;
}

BeamTestReport beam_test(const PairSampler& sampler, std::uint64_t n,
                         const RandomSource& rng) {
    if (n == 0) throw ConfigError("beam_test needs n >= 1");
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RandomSource child = rng.child("pair", i);
        sum += sampler.sample_probability(child);
    }
    const double mean = sum / double(n);
    const BeamVerdict v = mean <= kSingletVerdictThreshold
                              ? BeamVerdict::PolarizedPerPulse
                              : BeamVerdict::UnpolarizedConsistent;
    return BeamTestReport{mean, n, v};
}

const char* to_string(BellKind k) {
    switch (k) {
        case BellKind::PhiPlus: return "PHI_PLUS";
        case BellKind::PhiMinus: return "PHI_MINUS";
        case BellKind::PsiPlus: return "PSI_PLUS";
        case BellKind::PsiMinus: return "PSI_MINUS";
    }
    return "?";
}

const char* to_string(BeamVerdict v) {
    return v == BeamVerdict::PolarizedPerPulse ? "POLARIZED_PER_PULSE"
                                               : "UNPOLARIZED_CONSISTENT";
}

}  // namespace qpol
