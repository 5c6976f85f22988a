// dopcalc.hpp
// Single-photon degree of polarization as one minus the minimum quantum
// ignorance: q_min = 1 - sup over measurement directions of |1 - 2p|,
// dop = 1 - q_min. The supremum has a closed form for qubits (the Bloch
// vector length); the grid search exists to audit it.

#pragma once

#include "qpol/polarization.hpp"
#include "qpol/qcore.hpp"

namespace qpol {

enum class DopMethod { Grid, Analytic };

struct DopResult {
    double q_min;  // in [0,1]
    double dop;    // 1 - q_min
    MeasurementDirection argmax;
    DopMethod method;
};

// Partial trace of |psi><psi| down to the "pol" factor. Purity of the
// total state is enforced by the argument type.
DensityOperator reduced_polarization(const PureState& psi);

// tr(|d><d| rho) where |d> = direction_ket(d).
double detection_probability(const DensityOperator& rho_pol,
                             const MeasurementDirection& d);

// Exhaustive search over theta_i = i*pi/(n_theta-1) (inclusive) and
// phi_j = 2*pi*j/n_phi (periodic). Ties broken toward smallest theta,
// then smallest phi, so the argmax does not depend on sweep order.
// Never overshoots the true supremum, so q_min_grid >= q_min_analytic.
DopResult q_min_grid(const DensityOperator& rho_pol, std::size_t n_theta,
                     std::size_t n_phi);

// sup |1-2p| = bloch_length(rho_pol), so q_min = 1 - bloch_length.
// Argmax is the Bloch direction of the larger eigenvalue; for the
// maximally mixed state it is reported as (0,0) by convention.
DopResult q_min_analytic(const DensityOperator& rho_pol);

DopResult dop_of_state(const PureState& psi,
                       DopMethod method = DopMethod::Analytic,
                       std::size_t n_theta = 1000, std::size_t n_phi = 2000);

const char* to_string(DopMethod m);

}  // namespace qpol
