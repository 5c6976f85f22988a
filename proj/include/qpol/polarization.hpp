// polarization.hpp
// Polarization-qubit specifics: the named basis states, the Poincare-sphere
// parameterization (theta, phi), Stokes parameters and the measurement
// unitary family U(theta, phi).

#pragma once

#include <string_view>

#include "qpol/qcore.hpp"

namespace qpol {

inline const char* kPolLabel = "pol";

enum class NamedPolState { H, V, D, A, R, L };

// Point on the Poincare sphere. theta in [0, pi]; phi wrapped into [0, 2*pi).
class MeasurementDirection {
public:
    MeasurementDirection(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }

private:
    double theta_, phi_;
};

// Convention: s1 = rho_HH - rho_VV, s2 = 2 Re rho_HV, s3 = -2 Im rho_HV
// (right-circular positive).
struct StokesVector {
    double s0, s1, s2, s3;
};

// H=(1,0), V=(0,1), D=(H+V)/sqrt2, A=(H-V)/sqrt2, R=(H+iV)/sqrt2,
// L=(H-iV)/sqrt2; all on the single-factor "pol" layout.
PureState named_state(NamedPolState which);
PureState named_state(std::string_view name);  // throws NameError

// cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>. theta=0 is the |H> pole.
PureState direction_ket(const MeasurementDirection& d);

// First column direction_ket(d); second column
// sin(theta/2)|H> - e^{i phi} cos(theta/2)|V>. This phase choice is
// normative so emitted values are reproducible.
UnitaryOp measurement_unitary(const MeasurementDirection& d);

StokesVector stokes_of(const DensityOperator& rho);

// sqrt(s1^2+s2^2+s3^2)/s0, clamped into [0,1].
double bloch_length(const DensityOperator& rho);

}  // namespace qpol
