#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qpol/qcore.hpp"
#include "qpol/scrambler.hpp"

using namespace qpol;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m(0, 1) = cxd(0, -1);
    m(1, 0) = cxd(0, 1);
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

ComplexMatrix random_matrix(std::size_t n, RandomSource& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = cxd(rng.normal(), rng.normal());
    return m;
}

// Independent partial-trace oracle: decompose each full index into per-factor
// digits and sum entries whose non-kept digits agree. Slow and direct, no
// stride tricks shared with the implementation.
ComplexMatrix partial_trace_oracle(const DensityOperator& rho, std::size_t keep_pos) {
    const SubsystemLayout& lay = rho.layout();
    const std::size_t nf = lay.factor_count();
    std::vector<std::size_t> dims(nf);
    for (std::size_t i = 0; i < nf; ++i) dims[i] = lay.factor(i).dim;

    auto digits = [&](std::size_t idx) {
        std::vector<std::size_t> d(nf);
        for (std::size_t i = nf; i-- > 0;) {
            d[i] = idx % dims[i];
            idx /= dims[i];
        }
        return d;
    };

    const std::size_t dk = dims[keep_pos];
    ComplexMatrix out(dk, dk);
    const std::size_t total = lay.total_dim();
    for (std::size_t r = 0; r < total; ++r) {
        for (std::size_t c = 0; c < total; ++c) {
            const auto dr = digits(r), dc = digits(c);
            bool match = true;
            for (std::size_t i = 0; i < nf; ++i) {
                if (i != keep_pos && dr[i] != dc[i]) match = false;
            }
            if (match) out(dr[keep_pos], dc[keep_pos]) += rho.matrix()(r, c);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("matrix constructors enforce shape") {
    CHECK_THROWS_AS(ComplexMatrix(0, 2), ShapeError);
    CHECK_THROWS_AS(ComplexMatrix(2, 0), ShapeError);
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cxd>(3)), ShapeError);
    ComplexMatrix m(2, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    for (const auto& e : m.entries()) CHECK(e == cxd(0, 0));
}

TEST_CASE("identity, trace, adjoint") {
    ComplexMatrix i3 = ComplexMatrix::identity(3);
    CHECK(i3.trace() == cxd(3, 0));
    CHECK(i3.max_abs_diff(i3.adjoint()) == 0.0);

    ComplexMatrix m(2, 2, {cxd(1, 2), cxd(3, -1), cxd(0, 5), cxd(-2, 0)});
    ComplexMatrix a = m.adjoint();
    CHECK(a(0, 0) == cxd(1, -2));
    CHECK(a(0, 1) == cxd(0, -5));
    CHECK(a(1, 0) == cxd(3, 1));
    CHECK(a(1, 1) == cxd(-2, 0));
    CHECK_THROWS_AS(ComplexMatrix(2, 3).trace(), ShapeError);
}

TEST_CASE("pauli algebra: XY = iZ, X^2 = I") {
    const ComplexMatrix xy = pauli_x() * pauli_y();
    CHECK(xy.max_abs_diff(pauli_z().scaled(cxd(0, 1))) == 0.0);
    CHECK((pauli_x() * pauli_x()).max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
    CHECK_THROWS_AS(pauli_x() * ComplexMatrix(3, 3), ShapeError);
}

TEST_CASE("sum, difference, scaling") {
    const ComplexMatrix s = pauli_x() + pauli_x();
    CHECK(s.max_abs_diff(pauli_x().scaled(2.0)) == 0.0);
    const ComplexMatrix d = pauli_x() - pauli_x();
    CHECK(d.max_abs_diff(ComplexMatrix(2, 2)) == 0.0);
    CHECK_THROWS_AS(pauli_x() + ComplexMatrix(3, 3), ShapeError);
    CHECK_THROWS_AS(pauli_x() - ComplexMatrix(3, 3), ShapeError);
    CHECK_THROWS_AS(pauli_x().max_abs_diff(ComplexMatrix(3, 3)), ShapeError);
}

TEST_CASE("layout construction and queries") {
    SubsystemLayout lay({{"a", 2}, {"b", 3}, {"c", 2}});
    CHECK(lay.total_dim() == 12);
    CHECK(lay.factor_count() == 3);
    CHECK(lay.factor(1).label == "b");
    CHECK(lay.position_of("c") == std::size_t{2});
    CHECK(!lay.position_of("zzz").has_value());
    CHECK(lay.stride_of(0) == 6);
    CHECK(lay.stride_of(1) == 2);
    CHECK(lay.stride_of(2) == 1);

    CHECK(SubsystemLayout::single("pol", 2).total_dim() == 2);
    CHECK(lay == SubsystemLayout({{"a", 2}, {"b", 3}, {"c", 2}}));
    CHECK(!(lay == SubsystemLayout({{"a", 2}, {"b", 3}})));
    CHECK(!(lay == SubsystemLayout({{"a", 2}, {"b", 3}, {"d", 2}})));
}

TEST_CASE("layout rejects bad factor sets") {
    CHECK_THROWS_AS(SubsystemLayout({}), ConfigError);
    CHECK_THROWS_AS(SubsystemLayout({{"a", 1}}), ConfigError);
    CHECK_THROWS_AS(SubsystemLayout({{"a", 2}, {"a", 2}}), LabelCollision);
    CHECK_THROWS_AS(SubsystemLayout({{"pol", 3}}), ConfigError);
    CHECK_THROWS_AS(SubsystemLayout::single("big", 65), ConfigError);
    // 2^7 = 128 crosses the cap through composition.
    std::vector<SubsystemFactor> seven;
    for (int i = 0; i < 7; ++i) seven.push_back({std::string(1, char('a' + i)), 2});
    CHECK_THROWS_AS(SubsystemLayout{seven}, ConfigError);
}

TEST_CASE("layout concatenation") {
    SubsystemLayout ab = SubsystemLayout::single("a", 2).concatenated(
        SubsystemLayout::single("b", 3));
    CHECK(ab == SubsystemLayout({{"a", 2}, {"b", 3}}));
    CHECK_THROWS_AS(ab.concatenated(SubsystemLayout::single("a", 2)), LabelCollision);
}

TEST_CASE("pure state construction enforces norm and shape") {
    SubsystemLayout q = SubsystemLayout::single("a", 2);
    CHECK_THROWS_AS(PureState({cxd(1, 0)}, q), ShapeError);
    CHECK_THROWS_AS(PureState({cxd(1, 0), cxd(1, 0)}, q), NumericalError);

    PureState s = PureState::normalized({cxd(3, 0), cxd(4, 0)}, q);
    CHECK(s.amplitudes()[0].real() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s.amplitudes()[1].real() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.amplitudes()[0].imag() == 0.0);
    CHECK(s.amplitudes()[1].imag() == 0.0);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(PureState::normalized({cxd(0, 0), cxd(0, 0)}, q), NumericalError);
}

TEST_CASE("inner product is conjugate-linear in the left slot") {
    SubsystemLayout q = SubsystemLayout::single("a", 2);
    PureState up({cxd(1, 0), cxd(0, 0)}, q);
    PureState mix = PureState::normalized({cxd(1, 0), cxd(0, 1)}, q);
    const cxd uv = up.inner(mix);
    const cxd vu = mix.inner(up);
    CHECK(std::abs(uv - std::conj(vu)) < 1e-15);
    CHECK(std::abs(up.inner(up) - cxd(1, 0)) < 1e-15);
    CHECK_THROWS_AS(up.inner(PureState({cxd(1, 0), cxd(0, 0), cxd(0, 0)},
                                       SubsystemLayout::single("b", 3))),
                    ShapeError);
}

TEST_CASE("tensor_state composes amplitudes row-major") {
    SubsystemLayout qa = SubsystemLayout::single("a", 2);
    SubsystemLayout qb = SubsystemLayout::single("b", 2);
    PureState h({cxd(1, 0), cxd(0, 0)}, qa);
    PureState v({cxd(0, 0), cxd(1, 0)}, qb);
    PureState hv = tensor_state(h, v);
    CHECK(hv.dim() == 4);
    CHECK(hv.layout() == SubsystemLayout({{"a", 2}, {"b", 2}}));
    CHECK(hv.amplitudes()[0] == cxd(0, 0));
    CHECK(hv.amplitudes()[1] == cxd(1, 0));  // index = a*2 + b with a=0, b=1
    CHECK(hv.amplitudes()[2] == cxd(0, 0));
    CHECK(hv.amplitudes()[3] == cxd(0, 0));
    CHECK_THROWS_AS(tensor_state(h, PureState({cxd(1, 0), cxd(0, 0)}, qa)),
                    LabelCollision);
}

TEST_CASE("tensor_op matches the mixed-product identity") {
    RandomSource rng(11);
    const ComplexMatrix a = random_matrix(2, rng), b = random_matrix(3, rng);
    const ComplexMatrix c = random_matrix(2, rng), d = random_matrix(3, rng);
    const ComplexMatrix lhs = tensor_op(a, b) * tensor_op(c, d);
    const ComplexMatrix rhs = tensor_op(a * c, b * d);
    CHECK(lhs.max_abs_diff(rhs) < 1e-12);

    const ComplexMatrix xi = tensor_op(pauli_x(), ComplexMatrix::identity(2));
    CHECK(xi(0, 2) == cxd(1, 0));
    CHECK(xi(1, 3) == cxd(1, 0));
    CHECK(xi(2, 0) == cxd(1, 0));
    CHECK(xi(0, 0) == cxd(0, 0));
}

TEST_CASE("apply_unitary acts as the matrix and checks layout") {
    SubsystemLayout pol = SubsystemLayout::single("pol", 2);
    UnitaryOp x = UnitaryOp::checked(pauli_x(), pol);
    PureState h({cxd(1, 0), cxd(0, 0)}, pol);
    PureState flipped = apply_unitary(x, h);
    CHECK(flipped.amplitudes()[0] == cxd(0, 0));
    CHECK(flipped.amplitudes()[1] == cxd(1, 0));

    PureState other({cxd(1, 0), cxd(0, 0)}, SubsystemLayout::single("time", 2));
    CHECK_THROWS_AS(apply_unitary(x, other), ShapeError);
}

TEST_CASE("projector is idempotent and Hermitian") {
    RandomSource rng(21);
    SubsystemLayout lay({{"a", 2}, {"b", 2}});
    PureState s = random_pure_state(lay, rng);
    const ComplexMatrix p = projector(s);
    CHECK(p.max_abs_diff(p.adjoint()) < 1e-15);
    CHECK((p * p).max_abs_diff(p) < 1e-14);
    CHECK(std::abs(p.trace() - cxd(1, 0)) < 1e-14);
    CHECK(density_of(s).matrix().max_abs_diff(p) == 0.0);
}

TEST_CASE("born_probability on knowns and its guards") {
    SubsystemLayout pol = SubsystemLayout::single("pol", 2);
    DensityOperator half(ComplexMatrix::identity(2).scaled(0.5), pol);
    PureState h({cxd(1, 0), cxd(0, 0)}, pol);
    CHECK(born_probability(half, projector(h)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(born_probability(density_of(h), projector(h)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(born_probability(density_of(h), ComplexMatrix(2, 2)) == 0.0);

    ComplexMatrix skew(2, 2);
    skew(0, 1) = cxd(1, 0);  // not Hermitian
    CHECK_THROWS_AS(born_probability(half, skew), NumericalError);
    CHECK_THROWS_AS(born_probability(half, ComplexMatrix::identity(3)), ShapeError);
    // Projector scaled beyond 1 pushes the trace outside [0,1]+slack.
    CHECK_THROWS_AS(born_probability(half, ComplexMatrix::identity(2).scaled(3.0)),
                    NumericalError);
}

TEST_CASE("partial_trace agrees with the digit-decomposition oracle") {
    RandomSource rng(31);
    SubsystemLayout lay({{"a", 2}, {"b", 3}, {"c", 2}});
    for (int rep = 0; rep < 5; ++rep) {
        PureState s = random_pure_state(lay, rng);
        DensityOperator rho = density_of(s);
        const char* labels[3] = {"a", "b", "c"};
        for (std::size_t k = 0; k < 3; ++k) {
            DensityOperator red = partial_trace(rho, labels[k]);
            CHECK(red.layout().factor(0).label == labels[k]);
            CHECK(red.matrix().max_abs_diff(partial_trace_oracle(rho, k)) < 1e-13);
            CHECK(std::abs(red.matrix().trace() - cxd(1, 0)) < 1e-13);
        }
    }
}

TEST_CASE("partial_trace of a Bell pair is maximally mixed") {
    const double r = 1.0 / std::sqrt(2.0);
    SubsystemLayout lay({{"a", 2}, {"b", 2}});
    PureState bell({cxd(r, 0), cxd(0, 0), cxd(0, 0), cxd(r, 0)}, lay);
    DensityOperator rho = density_of(bell);
    for (const char* keep : {"a", "b"}) {
        DensityOperator red = partial_trace(rho, keep);
        CHECK(red.matrix().max_abs_diff(ComplexMatrix::identity(2).scaled(0.5)) <
              1e-12);
    }
}

TEST_CASE("partial_trace of a product state recovers the factor") {
    RandomSource rng(41);
    SubsystemLayout qa = SubsystemLayout::single("a", 2);
    SubsystemLayout qb = SubsystemLayout::single("b", 3);
    PureState a = random_pure_state(qa, rng);
    PureState b = random_pure_state(qb, rng);
    DensityOperator rho = density_of(tensor_state(a, b));
    CHECK(partial_trace(rho, "a").matrix().max_abs_diff(projector(a)) < 1e-13);
    CHECK(partial_trace(rho, "b").matrix().max_abs_diff(projector(b)) < 1e-13);
    CHECK_THROWS_AS(partial_trace(rho, "zzz"), LabelError);
}

TEST_CASE("validate_density flags each violation") {
    SubsystemLayout pol = SubsystemLayout::single("pol", 2);
    CHECK(validate_density(DensityOperator(ComplexMatrix::identity(2).scaled(0.5), pol)).ok);

    ComplexMatrix skew(2, 2, {cxd(0.5, 0), cxd(0.5, 0), cxd(0, 0), cxd(0.5, 0)});
    auto rep = validate_density(DensityOperator(skew, pol));
    CHECK(!rep.ok);
    CHECK(rep.violations.front().what == "not Hermitian");

    auto rep2 = validate_density(DensityOperator(ComplexMatrix::identity(2), pol));
    CHECK(!rep2.ok);
    CHECK(rep2.violations.front().what == "trace differs from 1");
    CHECK(rep2.violations.front().deviation == doctest::Approx(1.0));

    ComplexMatrix neg(2, 2, {cxd(1.5, 0), cxd(0, 0), cxd(0, 0), cxd(-0.5, 0)});
    auto rep3 = validate_density(DensityOperator(neg, pol));
    CHECK(!rep3.ok);
    CHECK(rep3.violations.front().what == "negative eigenvalue");
    CHECK(rep3.violations.front().deviation == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(DensityOperator::checked(neg, pol), NumericalError);
    CHECK_THROWS_AS(DensityOperator(ComplexMatrix(2, 3), pol), ShapeError);
    CHECK_THROWS_AS(DensityOperator(ComplexMatrix::identity(3), pol), ShapeError);
}

TEST_CASE("validate_unitary accepts Paulis and rejects scalings") {
    SubsystemLayout pol = SubsystemLayout::single("pol", 2);
    CHECK(validate_unitary(UnitaryOp(pauli_x(), pol)).ok);
    CHECK(validate_unitary(UnitaryOp(pauli_y(), pol)).ok);

    auto rep = validate_unitary(UnitaryOp(pauli_x().scaled(2.0), pol));
    CHECK(!rep.ok);
    CHECK(rep.violations.front().deviation == doctest::Approx(3.0));
    CHECK_THROWS_AS(UnitaryOp::checked(pauli_x().scaled(2.0), pol), NumericalError);
}

TEST_CASE("relabel keeps amplitudes and dimensions") {
    RandomSource rng(51);
    SubsystemLayout lay({{"a", 2}, {"b", 3}});
    PureState s = random_pure_state(lay, rng);
    PureState t = relabel(s, {"x", "y"});
    CHECK(t.layout() == SubsystemLayout({{"x", 2}, {"y", 3}}));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        CHECK(t.amplitudes()[i] == s.amplitudes()[i]);
    }
    CHECK_THROWS_AS(relabel(s, {"x"}), LabelError);
    CHECK_THROWS_AS(relabel(s, {"x", "x"}), LabelCollision);
}

TEST_CASE("random_pure_state is normalized, layout-bound and seed-deterministic") {
    SubsystemLayout lay({{"a", 2}, {"b", 2}});
    RandomSource r1(66), r2(66), r3(67);
    PureState s1 = random_pure_state(lay, r1);
    PureState s2 = random_pure_state(lay, r2);
    PureState s3 = random_pure_state(lay, r3);
    CHECK(s1.layout() == lay);
    CHECK(std::fabs(s1.norm() - 1.0) < 1e-12);
    double diff12 = 0.0, diff13 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        diff12 = std::max(diff12, std::abs(s1.amplitudes()[i] - s2.amplitudes()[i]));
        diff13 = std::max(diff13, std::abs(s1.amplitudes()[i] - s3.amplitudes()[i]));
    }
    CHECK(diff12 == 0.0);
    CHECK(diff13 > 1e-3);
}

TEST_CASE("hermitian_eigenvalues on closed-form cases") {
    ComplexMatrix m(2, 2, {cxd(2, 0), cxd(1, 0), cxd(1, 0), cxd(2, 0)});
    auto e = hermitian_eigenvalues(m);
    REQUIRE(e.size() == 2);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-12));

    auto ey = hermitian_eigenvalues(pauli_y());
    CHECK(ey[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ey[1] == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix one(1, 1, {cxd(4.5, 0)});
    CHECK(hermitian_eigenvalues(one) == std::vector<double>{4.5});

    ComplexMatrix diag(3, 3);
    diag(0, 0) = 3.0;
    diag(1, 1) = -1.0;
    diag(2, 2) = 2.0;
    auto ed = hermitian_eigenvalues(diag);
    CHECK(ed == std::vector<double>{-1.0, 2.0, 3.0});

    CHECK_THROWS_AS(hermitian_eigenvalues(ComplexMatrix(2, 3)), ShapeError);
}

TEST_CASE("hermitian_eigenvalues recovers a planted spectrum") {
    // U D U^dag with U a tensor of two Haar 2x2 blocks: a dense 4x4 unitary
    // with known spectrum {0.1, 0.2, 0.3, 0.4}.
    RandomSource rng(71);
    const ComplexMatrix u =
        tensor_op(haar_random_unitary(rng).matrix(), haar_random_unitary(rng).matrix());
    ComplexMatrix d(4, 4);
    d(0, 0) = 0.4;
    d(1, 1) = 0.2;
    d(2, 2) = 0.1;
    d(3, 3) = 0.3;
    const ComplexMatrix m = u * d * u.adjoint();
    auto e = hermitian_eigenvalues(m);
    REQUIRE(e.size() == 4);
    CHECK(e[0] == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(e[1] == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(e[2] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(e[3] == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("hermitian_eigenvalues preserves trace and Frobenius invariants") {
    RandomSource rng(81);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 2 + std::size_t(rep) % 4;
        ComplexMatrix a = random_matrix(n, rng);
        ComplexMatrix h = (a + a.adjoint()).scaled(0.5);
        auto e = hermitian_eigenvalues(h);
        double sum = 0.0, sumsq = 0.0;
        for (double v : e) {
            sum += v;
            sumsq += v * v;
        }
        CHECK(sum == doctest::Approx(h.trace().real()).epsilon(1e-10));
        CHECK(sumsq == doctest::Approx((h * h).trace().real()).epsilon(1e-10));
    }
}

TEST_CASE("trace_distance on knowns") {
    SubsystemLayout pol = SubsystemLayout::single("pol", 2);
    DensityOperator half(ComplexMatrix::identity(2).scaled(0.5), pol);
    PureState h({cxd(1, 0), cxd(0, 0)}, pol);
    PureState v({cxd(0, 0), cxd(1, 0)}, pol);
    CHECK(trace_distance(half, half) == 0.0);
    CHECK(trace_distance(density_of(h), half) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(trace_distance(density_of(h), density_of(v)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_distance(density_of(h), density_of(v)) ==
          trace_distance(density_of(v), density_of(h)));
    CHECK_THROWS_AS(
        trace_distance(half, DensityOperator(ComplexMatrix::identity(3).scaled(1.0 / 3),
                                             SubsystemLayout::single("t", 3))),
        ShapeError);
}
