// qcore.hpp
// Exact small-dimension complex linear algebra over labeled composite Hilbert
// spaces: pure states, density operators, unitaries, Kronecker composition
// and partial traces. Everything is immutable after construction and every
// operation is a pure function, so values are safe to share across threads.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpol/errors.hpp"
#include "qpol/rng.hpp"

namespace qpol {

using cxd = std::complex<double>;

// Tolerances. Algebraic identities hold to kAlgebraTol; unitarity and
// positive-semidefiniteness get the wider slack to absorb accumulated
// floating-point drift.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kProbSlack = 1e-10;

// Dense row-major complex matrix. The only carrier for operators here;
// dimensions stay tiny (total Hilbert dimension is capped at 64).
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cxd& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const cxd& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<cxd>& entries() const { return entries_; }

    ComplexMatrix adjoint() const;
    cxd trace() const;

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix scaled(cxd factor) const;

    // Largest entry magnitude of (this - rhs); handy for tolerance checks.
    double max_abs_diff(const ComplexMatrix& rhs) const;

private:
    std::size_t rows_, cols_;
    std::vector<cxd> entries_;
};

struct SubsystemFactor {
    std::string label;
    std::size_t dim;
};

// Ordered tensor-factor structure. First-listed factor is most significant
// in the row-major index convention: index = ((d0*dim1 + d1)*dim2 + d2)...
// The label "pol" is reserved for the polarization qubit and must have dim 2.
class SubsystemLayout {
public:
    explicit SubsystemLayout(std::vector<SubsystemFactor> factors);

    static SubsystemLayout single(std::string label, std::size_t dim);

    std::size_t total_dim() const { return total_dim_; }
    std::size_t factor_count() const { return factors_.size(); }
    const SubsystemFactor& factor(std::size_t i) const { return factors_[i]; }

    std::optional<std::size_t> position_of(std::string_view label) const;

    // Product of dimensions of all factors after position i.
    std::size_t stride_of(std::size_t position) const;

    // Concatenation; throws LabelCollision on duplicate labels.
    SubsystemLayout concatenated(const SubsystemLayout& other) const;

    bool operator==(const SubsystemLayout& rhs) const;

private:
    std::vector<SubsystemFactor> factors_;
    std::size_t total_dim_;
};

// Normalized amplitude vector over a layout. The constructor insists on unit
// norm (within kAlgebraTol); use normalized() to rescale arbitrary input.
class PureState {
public:
    PureState(std::vector<cxd> amplitudes, SubsystemLayout layout);

    static PureState normalized(std::vector<cxd> amplitudes, SubsystemLayout layout);

    const std::vector<cxd>& amplitudes() const { return amplitudes_; }
    const SubsystemLayout& layout() const { return layout_; }
    std::size_t dim() const { return amplitudes_.size(); }

    double norm() const;
    cxd inner(const PureState& other) const;  // <this|other>

private:
    std::vector<cxd> amplitudes_;
    SubsystemLayout layout_;
};

// Square operator tied to a layout. The plain constructor checks shape only;
// semantic invariants (Hermiticity, trace, PSD) are the business of
// validate_density / the checked() factory.
class DensityOperator {
public:
    DensityOperator(ComplexMatrix matrix, SubsystemLayout layout);

    static DensityOperator checked(ComplexMatrix matrix, SubsystemLayout layout);

    const ComplexMatrix& matrix() const { return matrix_; }
    const SubsystemLayout& layout() const { return layout_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    ComplexMatrix matrix_;
    SubsystemLayout layout_;
};

class UnitaryOp {
public:
    UnitaryOp(ComplexMatrix matrix, SubsystemLayout layout);

    static UnitaryOp checked(ComplexMatrix matrix, SubsystemLayout layout);

    const ComplexMatrix& matrix() const { return matrix_; }
    const SubsystemLayout& layout() const { return layout_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    ComplexMatrix matrix_;
    SubsystemLayout layout_;
};

struct Violation {
    std::string what;
    double deviation;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

// --- Operations ---

// Kronecker product of states; layouts concatenate, norm is preserved.
PureState tensor_state(const PureState& a, const PureState& b);

// Kronecker product of matrices, index convention matching tensor_state.
ComplexMatrix tensor_op(const ComplexMatrix& a, const ComplexMatrix& b);

PureState apply_unitary(const UnitaryOp& u, const PureState& s);

// |s><s| as a bare matrix.
ComplexMatrix projector(const PureState& s);

// |s><s| wrapped as a DensityOperator carrying s's layout.
DensityOperator density_of(const PureState& s);

// tr(P rho), forced real and clamped into [0,1]. Overshoot beyond kProbSlack
// (or a non-Hermitian P) is a NumericalError.
double born_probability(const DensityOperator& rho, const ComplexMatrix& p);

// Reduced operator of the factor `keep`; all other factors are summed out.
DensityOperator partial_trace(const DensityOperator& rho, std::string_view keep);

ValidationReport validate_density(const DensityOperator& rho);
ValidationReport validate_unitary(const UnitaryOp& u);

// Same amplitudes and factor dimensions under fresh labels; needed to tensor
// two copies of the same system without a label collision.
PureState relabel(const PureState& s, const std::vector<std::string>& labels);

// Haar-uniform pure state on the layout: complex-normal amplitudes,
// normalized. Consumes 2 * total_dim normals.
PureState random_pure_state(const SubsystemLayout& layout, RandomSource& rng);

// Eigenvalues of a Hermitian matrix, ascending (cyclic complex Jacobi).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// (1/2) * sum |eig(rho - sigma)|.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace qpol
