#include <doctest.h>

#include <cmath>
#include <complex>

#include "qpol/polarization.hpp"
#include "qpol/scrambler.hpp"

using namespace qpol;

namespace {

const double kPi = 3.14159265358979323846;

DensityOperator mixed_with(double purity, const PureState& psi) {
    // purity * |psi><psi| + (1 - purity)/2 * I: Bloch vector shrunk by purity.
    ComplexMatrix m = projector(psi).scaled(purity) +
                      ComplexMatrix::identity(2).scaled(0.5 * (1.0 - purity));
    return DensityOperator(m, psi.layout());
}

}  // namespace

TEST_CASE("measurement direction validates theta and wraps phi") {
    CHECK_THROWS_AS(MeasurementDirection(-0.1, 0.0), ConfigError);
    CHECK_THROWS_AS(MeasurementDirection(kPi + 0.1, 0.0), ConfigError);
    CHECK(MeasurementDirection(0.0, 0.0).phi() == 0.0);
    CHECK(MeasurementDirection(1.0, -0.5 * kPi).phi() ==
          doctest::Approx(1.5 * kPi).epsilon(1e-14));
    CHECK(MeasurementDirection(1.0, 2.0 * kPi).phi() ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(MeasurementDirection(1.0, 5.0 * kPi).phi() ==
          doctest::Approx(kPi).epsilon(1e-12));
    const MeasurementDirection d(0.25, 1.25);
    CHECK(d.theta() == 0.25);
    CHECK(d.phi() == 1.25);
}

TEST_CASE("named states are the textbook kets") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(named_state(NamedPolState::H).amplitudes()[0] == cxd(1, 0));
    CHECK(named_state(NamedPolState::H).amplitudes()[1] == cxd(0, 0));
    CHECK(named_state(NamedPolState::V).amplitudes()[1] == cxd(1, 0));
    CHECK(named_state(NamedPolState::D).amplitudes()[1] == cxd(r, 0));
    CHECK(named_state(NamedPolState::A).amplitudes()[1] == cxd(-r, 0));
    CHECK(named_state(NamedPolState::R).amplitudes()[1] == cxd(0, r));
    CHECK(named_state(NamedPolState::L).amplitudes()[1] == cxd(0, -r));
    CHECK(named_state(NamedPolState::H).layout().factor(0).label == kPolLabel);

    CHECK(std::abs(named_state("H").inner(named_state("V"))) == 0.0);
    CHECK(std::abs(named_state("D").inner(named_state("A"))) < 1e-15);
    CHECK(std::abs(named_state("R").inner(named_state("L"))) < 1e-15);
    CHECK(std::abs(named_state("H").inner(named_state("D")) - cxd(r, 0)) < 1e-15);
    CHECK_THROWS_AS(named_state("Q"), NameError);
    CHECK_THROWS_AS(named_state(""), NameError);
}

TEST_CASE("direction kets hit the poles and the equator") {
    // theta = 0 is |H> exactly: cos 0 and sin 0 are exact.
    PureState north = direction_ket(MeasurementDirection(0.0, 1.23));
    CHECK(north.amplitudes()[0] == cxd(1, 0));
    CHECK(north.amplitudes()[1] == cxd(0, 0));

    // theta = pi lands on |V> up to a phase and fp dust in cos(pi/2).
    PureState south = direction_ket(MeasurementDirection(kPi, 0.7));
    CHECK(std::abs(std::abs(south.inner(named_state("V"))) - 1.0) < 1e-12);

    double diff_d = 0.0, diff_r = 0.0;
    PureState d = direction_ket(MeasurementDirection(0.5 * kPi, 0.0));
    PureState rk = direction_ket(MeasurementDirection(0.5 * kPi, 0.5 * kPi));
    for (int i = 0; i < 2; ++i) {
        diff_d = std::max(diff_d, std::abs(d.amplitudes()[std::size_t(i)] -
                                           named_state("D").amplitudes()[std::size_t(i)]));
        diff_r = std::max(diff_r, std::abs(rk.amplitudes()[std::size_t(i)] -
                                           named_state("R").amplitudes()[std::size_t(i)]));
    }
    CHECK(diff_d < 1e-15);
    CHECK(diff_r < 1e-15);
}

TEST_CASE("antipodal directions give orthogonal kets") {
    const double thetas[] = {0.3, 1.0, 2.0, 2.9};
    const double phis[] = {0.0, 1.1, 3.3, 5.5};
    for (double t : thetas) {
        for (double p : phis) {
            PureState a = direction_ket(MeasurementDirection(t, p));
            PureState b = direction_ket(MeasurementDirection(kPi - t, p + kPi));
            CHECK(std::abs(a.inner(b)) < 1e-12);
        }
    }
}

TEST_CASE("measurement_unitary: first column is the ket, matrix is unitary") {
    const double thetas[] = {0.0, 0.4, 0.5 * kPi, 2.5, kPi};
    const double phis[] = {0.0, 0.9, 4.0};
    for (double t : thetas) {
        for (double p : phis) {
            const MeasurementDirection dir(t, p);
            const UnitaryOp u = measurement_unitary(dir);
            const PureState ket = direction_ket(dir);
            CHECK(u.matrix()(0, 0) == ket.amplitudes()[0]);
            CHECK(u.matrix()(1, 0) == ket.amplitudes()[1]);
            CHECK(validate_unitary(u).ok);
        }
    }
}

TEST_CASE("measurement_unitary phase convention is frozen") {
    // At theta = 0 the second column is phase * (0, -1), not the identity's
    // (0, 1); the sign is part of the reproducibility contract.
    const UnitaryOp u0 = measurement_unitary(MeasurementDirection(0.0, 0.0));
    CHECK(u0.matrix()(0, 0) == cxd(1, 0));
    CHECK(u0.matrix()(0, 1) == cxd(0, 0));
    CHECK(u0.matrix()(1, 0) == cxd(0, 0));
    CHECK(u0.matrix()(1, 1) == cxd(-1, 0));

    const UnitaryOp u = measurement_unitary(MeasurementDirection(1.0, 2.0));
    const double c = std::cos(0.5), s = std::sin(0.5);
    const cxd phase = std::polar(1.0, 2.0);
    CHECK(std::abs(u.matrix()(0, 1) - cxd(s, 0)) == 0.0);
    CHECK(std::abs(u.matrix()(1, 1) - (-phase * c)) == 0.0);
}

TEST_CASE("stokes_of on the named states") {
    auto stokes = [](NamedPolState w) { return stokes_of(density_of(named_state(w))); };

    StokesVector h = stokes(NamedPolState::H);
    CHECK(h.s0 == 1.0);
    CHECK(h.s1 == 1.0);
    CHECK(h.s2 == 0.0);
    CHECK(h.s3 == 0.0);

    StokesVector v = stokes(NamedPolState::V);
    CHECK(v.s1 == -1.0);

    StokesVector d = stokes(NamedPolState::D);
    CHECK(d.s0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.s1 == 0.0);
    CHECK(d.s2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.s3 == 0.0);

    StokesVector a = stokes(NamedPolState::A);
    CHECK(a.s2 == doctest::Approx(-1.0).epsilon(1e-14));

    // Right-circular has s3 = +1 under the sign convention s3 = -2 Im rho_HV.
    StokesVector rr = stokes(NamedPolState::R);
    CHECK(rr.s3 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rr.s1 == doctest::Approx(0.0).epsilon(1e-14));
    StokesVector l = stokes(NamedPolState::L);
    CHECK(l.s3 == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("stokes_of guards shape and physicality") {
    SubsystemLayout pair({{"a", 2}, {"b", 2}});
    CHECK_THROWS_AS(
        stokes_of(DensityOperator(ComplexMatrix::identity(4).scaled(0.25), pair)),
        ShapeError);

    SubsystemLayout pol = SubsystemLayout::single(kPolLabel, 2);
    ComplexMatrix neg(2, 2, {cxd(1.5, 0), cxd(0, 0), cxd(0, 0), cxd(-0.5, 0)});
    CHECK_THROWS_AS(stokes_of(DensityOperator(neg, pol)), NumericalError);
    ComplexMatrix skew(2, 2, {cxd(0.5, 0), cxd(0.4, 0), cxd(0, 0), cxd(0.5, 0)});
    CHECK_THROWS_AS(stokes_of(DensityOperator(skew, pol)), NumericalError);
}

TEST_CASE("stokes vector length never exceeds s0 for physical states") {
    RandomSource rng(13);
    SubsystemLayout pol = SubsystemLayout::single(kPolLabel, 2);
    for (int rep = 0; rep < 30; ++rep) {
        PureState psi = random_pure_state(pol, rng);
        const double purity = rng.uniform();
        StokesVector s = stokes_of(mixed_with(purity, psi));
        const double len = std::sqrt(s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3);
        CHECK(len <= s.s0 + 1e-12);
        CHECK(s.s0 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bloch_length on closed forms") {
    SubsystemLayout pol = SubsystemLayout::single(kPolLabel, 2);
    ComplexMatrix diag(2, 2, {cxd(0.75, 0), cxd(0, 0), cxd(0, 0), cxd(0.25, 0)});
    CHECK(bloch_length(DensityOperator(diag, pol)) == 0.5);
    CHECK(bloch_length(DensityOperator(ComplexMatrix::identity(2).scaled(0.5), pol)) ==
          0.0);
    CHECK(bloch_length(density_of(named_state("R"))) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bloch_length equals the purity shortcut sqrt(2 tr rho^2 - 1)") {
    RandomSource rng(17);
    SubsystemLayout pol = SubsystemLayout::single(kPolLabel, 2);
    for (int rep = 0; rep < 30; ++rep) {
        PureState psi = random_pure_state(pol, rng);
        DensityOperator rho = mixed_with(rng.uniform(), psi);
        const double tr2 = (rho.matrix() * rho.matrix()).trace().real();
        const double expected = std::sqrt(std::max(0.0, 2.0 * tr2 - 1.0));
        CHECK(bloch_length(rho) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("bloch_length is invariant under unitary conjugation") {
    RandomSource rng(19);
    SubsystemLayout pol = SubsystemLayout::single(kPolLabel, 2);
    for (int rep = 0; rep < 20; ++rep) {
        PureState psi = random_pure_state(pol, rng);
        DensityOperator rho = mixed_with(rng.uniform(), psi);
        const ComplexMatrix u = haar_random_unitary(rng).matrix();
        DensityOperator rotated(u * rho.matrix() * u.adjoint(), pol);
        CHECK(bloch_length(rotated) ==
              doctest::Approx(bloch_length(rho)).epsilon(1e-10));
    }
}
