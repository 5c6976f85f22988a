#include "qpol/dopcalc.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qpol/errors.hpp"

namespace qpol {

namespace {

const double kPi = 3.14159265358979323846;

void require_qubit(const DensityOperator& rho, const char* who) {
    if (rho.layout().total_dim() != 2) {
        throw ShapeError(std::string(who) + " requires a 2-dim polarization state");
    }
}

}  // namespace

DensityOperator reduced_polarization(const PureState& psi) {
    return partial_trace(density_of(psi), kPolLabel);
}

double detection_probability(const DensityOperator& rho_pol,
                             const MeasurementDirection& d) {
    require_qubit(rho_pol, "detection_probability");
    return born_probability(rho_pol, projector(direction_ket(d)));
}

DopResult q_min_grid(const DensityOperator& rho_pol, std::size_t n_theta,
                     std::size_t n_phi) {
    require_qubit(rho_pol, "q_min_grid");
    if (n_theta < 2 || n_phi < 2) {
        throw ConfigError("q_min_grid needs n_theta >= 2 and n_phi >= 2");
    }
    ValidationReport rep = validate_density(rho_pol);
    if (!rep.ok) {
        throw NumericalError("q_min_grid input is not a valid density operator: " +
                             rep.violations.front().what);
    }

    const ComplexMatrix& m = rho_pol.matrix();
    const double r00 = m(0, 0).real();
    const double r11 = m(1, 1).real();
    const double re01 = m(0, 1).real();
    const double im01 = m(0, 1).imag();

    // p(theta,phi) = <d|rho|d> = c^2 r00 + s^2 r11 + 2cs Re(e^{i phi} rho01)
    // with c = cos(theta/2), s = sin(theta/2). Factor it so the inner loop
    // is two flops; this is the same Born value, just not re-deriving the
    // projector at every node.
    std::vector<double> diag_part(n_theta), cross_part(n_theta);
    std::vector<double> theta_grid(n_theta);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double theta = double(i) * kPi / double(n_theta - 1);
        const double c = std::cos(0.5 * theta);
        const double s = std::sin(0.5 * theta);
        theta_grid[i] = theta;
        diag_part[i] = c * c * r00 + s * s * r11;
        cross_part[i] = c * s;
    }
    std::vector<double> phase_part(n_phi), phi_grid(n_phi);
    for (std::size_t j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * kPi * double(j) / double(n_phi);
        phi_grid[j] = phi;
        phase_part[j] = 2.0 * (std::cos(phi) * re01 - std::sin(phi) * im01);
    }

    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double a = diag_part[i];
        const double b = cross_part[i];
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double p = a + b * phase_part[j];
            const double gap = std::fabs(1.0 - 2.0 * p);
            if (gap > best) {  // strict: first hit wins the tie-break
                best = gap;
                bi = i;
                bj = j;
            }
        }
    }
    if (best > 1.0) best = 1.0;
    const double q_min = 1.0 - best;
    DopResult out{q_min, 1.0 - q_min,
                  MeasurementDirection(theta_grid[bi], phi_grid[bj]),
                  DopMethod::Grid};
    return out;
}

DopResult q_min_analytic(const DensityOperator& rho_pol) {
    require_qubit(rho_pol, "q_min_analytic");
    StokesVector s = stokes_of(rho_pol);
    const double s1 = s.s1 / s.s0, s2 = s.s2 / s.s0, s3 = s.s3 / s.s0;
    double r = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    if (r > 1.0) r = 1.0;

    double theta = 0.0, phi = 0.0;
    if (r > 1e-15) {
        double cth = s1 / r;
        if (cth > 1.0) cth = 1.0;
        if (cth < -1.0) cth = -1.0;
        theta = std::acos(cth);
        phi = std::atan2(s3, s2);
    }
    const double q_min = 1.0 - r;
    return DopResult{q_min, 1.0 - q_min, MeasurementDirection(theta, phi),
                     DopMethod::Analytic};
}

DopResult dop_of_state(const PureState& psi, DopMethod method,
                       std::size_t n_theta, std::size_t n_phi) {
    DensityOperator rho = reduced_polarization(psi);
    if (method == DopMethod::Grid) return q_min_grid(rho, n_theta, n_phi);
    return q_min_analytic(rho);
}

const char* to_string(DopMethod m) {
    return m == DopMethod::Grid ? "grid" : "analytic";
}

}  // namespace qpol
