#include "qpol/polarization.hpp"

#include <cmath>
#include <string>

#include "qpol/errors.hpp"

namespace qpol {

namespace {

const double kPi = 3.14159265358979323846;

SubsystemLayout pol_layout() { return SubsystemLayout::single(kPolLabel, 2); }

}  // namespace

MeasurementDirection::MeasurementDirection(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= kPi)) {
        throw ConfigError("measurement direction theta out of range [0, pi]: " +
                          std::to_string(theta));
    }
    theta_ = theta;
    phi_ = std::fmod(phi, 2.0 * kPi);
    if (phi_ < 0.0) phi_ += 2.0 * kPi;
}

PureState named_state(NamedPolState which) {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<cxd> amps(2);
    switch (which) {
        case NamedPolState::H: amps = {cxd(1, 0), cxd(0, 0)}; break;
        case NamedPolState::V: amps = {cxd(0, 0), cxd(1, 0)}; break;
        case NamedPolState::D: amps = {cxd(r, 0), cxd(r, 0)}; break;
        case NamedPolState::A: amps = {cxd(r, 0), cxd(-r, 0)}; break;
        case NamedPolState::R: amps = {cxd(r, 0), cxd(0, r)}; break;
        case NamedPolState::L: amps = {cxd(r, 0), cxd(0, -r)}; break;
    }
    return PureState(amps, pol_layout());
}

PureState named_state(std::string_view name) {
    if (name == "H") return named_state(NamedPolState::H);
    if (name == "V") return named_state(NamedPolState::V);
    if (name == "D") return named_state(NamedPolState::D);
    if (name == "A") return named_state(NamedPolState::A);
    if (name == "R") return named_state(NamedPolState::R);
    if (name == "L") return named_state(NamedPolState::L);
    throw NameError("unknown polarization state name: " + std::string(name));
}

PureState direction_ket(const MeasurementDirection& d) {
    const double half = 0.5 * d.theta();
    const cxd phase = std::polar(1.0, d.phi());
    std::vector<cxd> amps = {cxd(std::cos(half), 0.0), phase * std::sin(half)};
    return PureState(amps, pol_layout());
}

UnitaryOp measurement_unitary(const MeasurementDirection& d) {
    const double c = std::cos(0.5 * d.theta());
    const double s = std::sin(0.5 * d.theta());
    const cxd phase = std::polar(1.0, d.phi());
    ComplexMatrix m(2, 2);
    m(0, 0) = cxd(c, 0.0);
    m(0, 1) = cxd(s, 0.0);
    m(1, 0) = phase * s;
    m(1, 1) = -phase * c;
    return UnitaryOp::checked(m, pol_layout());
}

StokesVector stokes_of(const DensityOperator& rho) {
    if (rho.layout().total_dim() != 2) {
        throw ShapeError("stokes_of requires a single-qubit density operator");
    }
    ValidationReport rep = validate_density(rho);
    if (!rep.ok) {
        throw NumericalError("stokes_of input is not a valid density operator: " +
                             rep.violations.front().what);
    }
    const ComplexMatrix& m = rho.matrix();
    StokesVector s;
    s.s0 = m(0, 0).real() + m(1, 1).real();
    s.s1 = m(0, 0).real() - m(1, 1).real();
    s.s2 = 2.0 * m(0, 1).real();
    s.s3 = -2.0 * m(0, 1).imag();
    return s;
}

double bloch_length(const DensityOperator& rho) {
    StokesVector s = stokes_of(rho);
    double len = std::sqrt(s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3) / s.s0;
    if (len > 1.0) len = 1.0;
    if (len < 0.0) len = 0.0;
    return len;
}

}  // namespace qpol
