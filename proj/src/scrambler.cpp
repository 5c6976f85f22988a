#include "qpol/scrambler.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qpol/dopcalc.hpp"
#include "qpol/errors.hpp"

namespace qpol {

namespace {

const double kPi = 3.14159265358979323846;

SubsystemLayout pol_layout() { return SubsystemLayout::single(kPolLabel, 2); }

}  // namespace

TimeSchedule::TimeSchedule(std::vector<UnitaryOp> bins) : bins_(std::move(bins)) {
    for (std::size_t k = 0; k < bins_.size(); ++k) {
        if (bins_[k].layout().total_dim() != 2) {
            throw ScheduleError("schedule bin " + std::to_string(k) +
                                " is not a 2x2 polarization unitary");
        }
        ValidationReport rep = validate_unitary(bins_[k]);
        if (!rep.ok) {
            throw ScheduleError("schedule bin " + std::to_string(k) +
                                " is not unitary: " + rep.violations.front().what);
        }
    }
}

PureState timebin_input(double theta_phase) {
    const double r = 1.0 / std::sqrt(2.0);
    const cxd late = std::polar(r, theta_phase);
    SubsystemLayout layout({{kTimeLabel, 2}, {kPolLabel, 2}});
    // index = time*2 + pol; all amplitude in the |H> polarization column
    std::vector<cxd> amps = {cxd(r, 0.0), cxd(0, 0), late, cxd(0, 0)};
    return PureState(amps, layout);
}

PureState apply_schedule(const PureState& psi, const TimeSchedule& sched) {
    const SubsystemLayout& layout = psi.layout();
    auto pos_time = layout.position_of(kTimeLabel);
    auto pos_pol = layout.position_of(kPolLabel);
    if (!pos_time) throw LabelError("apply_schedule needs a 'time' factor");
    if (!pos_pol) throw LabelError("apply_schedule needs a 'pol' factor");
    const std::size_t dt = layout.factor(*pos_time).dim;
    if (sched.size() != dt) {
        throw ScheduleError("schedule has " + std::to_string(sched.size()) +
                            " bins but the time factor has " +
                            std::to_string(dt));
    }
    const std::size_t st = layout.stride_of(*pos_time);
    const std::size_t sp = layout.stride_of(*pos_pol);
    const std::size_t total = layout.total_dim();

    std::vector<cxd> amps(psi.amplitudes());
    for (std::size_t base = 0; base < total; ++base) {
        if ((base / st) % dt != 0 || (base / sp) % 2 != 0) continue;
        for (std::size_t t = 0; t < dt; ++t) {
            const ComplexMatrix& u = sched.bin(t).matrix();
            const std::size_t i0 = base + t * st;
            const std::size_t i1 = i0 + sp;
            const cxd a0 = amps[i0], a1 = amps[i1];
            amps[i0] = u(0, 0) * a0 + u(0, 1) * a1;
            amps[i1] = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
    return PureState(amps, layout);
}

UnitaryOp partial_flip(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5 * kPi)) {
        throw ConfigError("partial_flip angle out of range [0, pi/2]: " +
                          std::to_string(alpha));
    }
    const double c = std::cos(alpha), s = std::sin(alpha);
    ComplexMatrix m(2, 2);
    m(0, 0) = cxd(c, 0);
    m(0, 1) = cxd(-s, 0);
    m(1, 0) = cxd(s, 0);
    m(1, 1) = cxd(c, 0);
    return UnitaryOp::checked(m, pol_layout());
}

UnitaryOp haar_random_unitary(RandomSource& rng) {
    // Hurwitz parameterization: phases uniform on [0, 2pi), mixing angle
    // theta = asin(sqrt(u)) so that the column balance is Haar. Draw order
    // is part of the determinism contract.
    const double alpha = 2.0 * kPi * rng.uniform();
    const double psi = 2.0 * kPi * rng.uniform();
    const double chi = 2.0 * kPi * rng.uniform();
    const double theta = std::asin(std::sqrt(rng.uniform()));
    const double c = std::cos(theta), s = std::sin(theta);
    const cxd ea = std::polar(1.0, alpha);
    ComplexMatrix m(2, 2);
    m(0, 0) = ea * std::polar(c, psi);
    m(0, 1) = ea * std::polar(s, chi);
    m(1, 0) = -ea * std::polar(s, -chi);
    m(1, 1) = ea * std::polar(c, -psi);
    return UnitaryOp::checked(m, pol_layout());
}

EnsembleReport per_pulse_ensemble(const PureState& base,
                                  const ScramblerMode& mode, std::uint64_t n,
                                  const RandomSource& rng) {
    if (mode.kind != ScramblerKind::PerPulse) {
        throw ConfigError("per_pulse_ensemble requires a per-pulse mode");
    }
    if (n == 0) throw ConfigError("per_pulse_ensemble needs n >= 1");
    const SubsystemLayout& bl = base.layout();
    if (bl.total_dim() != 2 || bl.factor(0).label != kPolLabel) {
        throw ShapeError("per_pulse_ensemble base must be a bare polarization qubit");
    }
    if (mode.sampler == SamplerKind::Fixed && mode.fixed.empty()) {
        throw ConfigError("fixed sampler needs a unitary");
    }

    const UnitaryOp ident = pol_identity();
    const UnitaryOp flip = pol_flip();
    ComplexMatrix sum(2, 2);
    double min_dop = 1.0, max_dop = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RandomSource child = rng.child("per-pulse", i);
        const UnitaryOp* u = nullptr;
        UnitaryOp drawn = ident;
        switch (mode.sampler) {
            case SamplerKind::IxCoinflip:
                u = child.uniform() < 0.5 ? &ident : &flip;
                break;
            case SamplerKind::Haar:
                drawn = haar_random_unitary(child);
                u = &drawn;
                break;
            case SamplerKind::Fixed:
                u = &mode.fixed.front();
                break;
        }
        PureState sample = apply_unitary(*u, base);
        const ComplexMatrix proj = projector(sample);
        for (std::size_t k = 0; k < 4; ++k) {
            sum(k / 2, k % 2) += proj(k / 2, k % 2);
        }
        const double dop =
            bloch_length(DensityOperator::checked(proj, pol_layout()));
        if (dop < min_dop) min_dop = dop;
        if (dop > max_dop) max_dop = dop;
    }
    ComplexMatrix mean = sum.scaled(cxd(1.0 / double(n), 0.0));
    DensityOperator mean_rho = DensityOperator::checked(mean, pol_layout());
    return EnsembleReport{mean_rho, n, min_dop, max_dop,
                          bloch_length(mean_rho)};
}

UnitaryOp pol_identity() {
    return UnitaryOp::checked(ComplexMatrix::identity(2), pol_layout());
}

UnitaryOp pol_flip() {
    ComplexMatrix x(2, 2);
    x(0, 1) = cxd(1, 0);
    x(1, 0) = cxd(1, 0);
    return UnitaryOp::checked(x, pol_layout());
}

TimeSchedule identity_flip_schedule() {
    return TimeSchedule({pol_identity(), pol_flip()});
}

}  // namespace qpol
