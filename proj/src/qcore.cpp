#include "qpol/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace qpol {

namespace {

// Non-goal guard: this library is for few-qubit composite spaces.
constexpr std::size_t kMaxTotalDim = 64;

}  // namespace

// --- ComplexMatrix ---

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cxd{0.0, 0.0}) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be at least 1x1");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be at least 1x1");
    }
    if (entries_.size() != rows * cols) {
        throw ShapeError("entry count does not match rows*cols");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

cxd ComplexMatrix::trace() const {
    if (rows_ != cols_) throw ShapeError("trace requires a square matrix");
    cxd t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw ShapeError("matrix product dimension mismatch");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            cxd a = (*this)(r, k);
            if (a == cxd{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix sum shape mismatch");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix difference shape mismatch");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= rhs.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::scaled(cxd factor) const {
    ComplexMatrix out = *this;
    for (auto& e : out.entries_) e *= factor;
    return out;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix compare shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        worst = std::max(worst, std::abs(entries_[i] - rhs.entries_[i]));
    return worst;
}

// --- SubsystemLayout ---

SubsystemLayout::SubsystemLayout(std::vector<SubsystemFactor> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty()) throw ConfigError("layout needs at least one factor");
    std::unordered_set<std::string> seen;
    total_dim_ = 1;
    for (const auto& f : factors_) {
        if (f.dim < 2) throw ConfigError("factor '" + f.label + "' must have dim >= 2");
        if (!seen.insert(f.label).second) {
            throw LabelCollision("duplicate subsystem label '" + f.label + "'");
        }
        if (f.label == "pol" && f.dim != 2) {
            throw ConfigError("the 'pol' factor must have dim 2");
        }
        total_dim_ *= f.dim;
        if (total_dim_ > kMaxTotalDim) {
            throw ConfigError("total Hilbert dimension exceeds 64");
        }
    }
}

SubsystemLayout SubsystemLayout::single(std::string label, std::size_t dim) {
    return SubsystemLayout({{std::move(label), dim}});
}

std::optional<std::size_t> SubsystemLayout::position_of(std::string_view label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].label == label) return i;
    return std::nullopt;
}

std::size_t SubsystemLayout::stride_of(std::size_t position) const {
    std::size_t s = 1;
    for (std::size_t i = position + 1; i < factors_.size(); ++i) s *= factors_[i].dim;
    return s;
}

SubsystemLayout SubsystemLayout::concatenated(const SubsystemLayout& other) const {
    std::vector<SubsystemFactor> all = factors_;
    all.insert(all.end(), other.factors_.begin(), other.factors_.end());
    return SubsystemLayout(std::move(all));
}

bool SubsystemLayout::operator==(const SubsystemLayout& rhs) const {
    if (factors_.size() != rhs.factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].label != rhs.factors_[i].label) return false;
        if (factors_[i].dim != rhs.factors_[i].dim) return false;
    }
    return true;
}

// --- PureState ---

PureState::PureState(std::vector<cxd> amplitudes, SubsystemLayout layout)
    : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    if (amplitudes_.size() != layout_.total_dim()) {
        throw ShapeError("amplitude count does not match layout dimension");
    }
    double n = norm();
    if (std::abs(n - 1.0) > kAlgebraTol) {
        throw NumericalError("pure state is not normalized (norm = " + std::to_string(n) + ")");
    }
}

PureState PureState::normalized(std::vector<cxd> amplitudes, SubsystemLayout layout) {
    double sq = 0.0;
    for (const auto& a : amplitudes) sq += std::norm(a);
    if (sq <= 0.0) throw NumericalError("cannot normalize the zero vector");
    double inv = 1.0 / std::sqrt(sq);
    for (auto& a : amplitudes) a *= inv;
    return PureState(std::move(amplitudes), std::move(layout));
}

double PureState::norm() const {
    double sq = 0.0;
    for (const auto& a : amplitudes_) sq += std::norm(a);
    return std::sqrt(sq);
}

cxd PureState::inner(const PureState& other) const {
    if (amplitudes_.size() != other.amplitudes_.size()) {
        throw ShapeError("inner product dimension mismatch");
    }
    cxd acc{0.0, 0.0};
    for (std::size_t i = 0; i < amplitudes_.size(); ++i)
        acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    return acc;
}

// --- DensityOperator / UnitaryOp ---

DensityOperator::DensityOperator(ComplexMatrix matrix, SubsystemLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    if (matrix_.rows() != matrix_.cols()) throw ShapeError("density operator must be square");
    if (matrix_.rows() != layout_.total_dim()) {
        throw ShapeError("density operator dimension does not match layout");
    }
}

DensityOperator DensityOperator::checked(ComplexMatrix matrix, SubsystemLayout layout) {
    DensityOperator rho(std::move(matrix), std::move(layout));
    ValidationReport rep = validate_density(rho);
    if (!rep.ok) {
        throw NumericalError("invalid density operator: " + rep.violations.front().what);
    }
    return rho;
}

UnitaryOp::UnitaryOp(ComplexMatrix matrix, SubsystemLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    if (matrix_.rows() != matrix_.cols()) throw ShapeError("unitary must be square");
    if (matrix_.rows() != layout_.total_dim()) {
        throw ShapeError("unitary dimension does not match layout");
    }
}

UnitaryOp UnitaryOp::checked(ComplexMatrix matrix, SubsystemLayout layout) {
    UnitaryOp u(std::move(matrix), std::move(layout));
    ValidationReport rep = validate_unitary(u);
    if (!rep.ok) {
        throw NumericalError("invalid unitary: " + rep.violations.front().what);
    }
    return u;
}

// --- Operations ---

PureState tensor_state(const PureState& a, const PureState& b) {
    SubsystemLayout layout = a.layout().concatenated(b.layout());
    std::vector<cxd> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
    return PureState(std::move(amps), std::move(layout));
}

ComplexMatrix tensor_op(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ra = 0; ra < a.rows(); ++ra)
        for (std::size_t ca = 0; ca < a.cols(); ++ca) {
            cxd f = a(ra, ca);
            if (f == cxd{0.0, 0.0}) continue;
            for (std::size_t rb = 0; rb < b.rows(); ++rb)
                for (std::size_t cb = 0; cb < b.cols(); ++cb)
                    out(ra * b.rows() + rb, ca * b.cols() + cb) = f * b(rb, cb);
        }
    return out;
}

PureState apply_unitary(const UnitaryOp& u, const PureState& s) {
    if (!(u.layout() == s.layout())) {
        throw ShapeError("unitary and state layouts do not match");
    }
    std::size_t n = s.dim();
    std::vector<cxd> out(n, cxd{0.0, 0.0});
    const ComplexMatrix& m = u.matrix();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out[r] += m(r, c) * s.amplitudes()[c];
    return PureState(std::move(out), s.layout());
}

ComplexMatrix projector(const PureState& s) {
    std::size_t n = s.dim();
    ComplexMatrix p(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            p(r, c) = s.amplitudes()[r] * std::conj(s.amplitudes()[c]);
    return p;
}

DensityOperator density_of(const PureState& s) {
    return DensityOperator(projector(s), s.layout());
}

double born_probability(const DensityOperator& rho, const ComplexMatrix& p) {
    if (p.rows() != p.cols() || p.rows() != rho.dim()) {
        throw ShapeError("projector dimension does not match state");
    }
    if (p.max_abs_diff(p.adjoint()) > kAlgebraTol) {
        throw NumericalError("measurement operator is not Hermitian");
    }
    // tr(P rho) = sum_ij P_ij rho_ji
    cxd t{0.0, 0.0};
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) t += p(i, j) * rho.matrix()(j, i);
    if (std::abs(t.imag()) > kAlgebraTol) {
        throw NumericalError("Born probability has nonreal trace");
    }
    double v = t.real();
    if (v < -kProbSlack || v > 1.0 + kProbSlack) {
        throw NumericalError("Born probability outside [0,1] beyond slack");
    }
    return std::clamp(v, 0.0, 1.0);
}

DensityOperator partial_trace(const DensityOperator& rho, std::string_view keep) {
    const SubsystemLayout& layout = rho.layout();
    auto pos = layout.position_of(keep);
    if (!pos) throw LabelError("no subsystem labeled '" + std::string(keep) + "'");
    std::size_t dk = layout.factor(*pos).dim;
    std::size_t sk = layout.stride_of(*pos);

    // Base indices: every full index whose `keep` digit is zero.
    std::vector<std::size_t> bases;
    bases.reserve(layout.total_dim() / dk);
    for (std::size_t idx = 0; idx < layout.total_dim(); ++idx)
        if ((idx / sk) % dk == 0) bases.push_back(idx);

    ComplexMatrix out(dk, dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
            cxd acc{0.0, 0.0};
            for (std::size_t base : bases)
                acc += rho.matrix()(base + a * sk, base + b * sk);
            out(a, b) = acc;
        }
    return DensityOperator(std::move(out), SubsystemLayout::single(std::string(keep), dk));
}

ValidationReport validate_density(const DensityOperator& rho) {
    ValidationReport rep;
    const ComplexMatrix& m = rho.matrix();
    double herm = m.max_abs_diff(m.adjoint());
    if (herm > kAlgebraTol) rep.violations.push_back({"not Hermitian", herm});
    double tr_dev = std::abs(m.trace() - cxd{1.0, 0.0});
    if (tr_dev > kAlgebraTol) rep.violations.push_back({"trace differs from 1", tr_dev});
    // Eigen-check on the Hermitian part; meaningless on a badly non-Hermitian
    // input, but those were already flagged above.
    ComplexMatrix sym = (m + m.adjoint()).scaled(0.5);
    std::vector<double> eigs = hermitian_eigenvalues(sym);
    if (!eigs.empty() && eigs.front() < -kPsdSlack) {
        rep.violations.push_back({"negative eigenvalue", -eigs.front()});
    }
    rep.ok = rep.violations.empty();
    return rep;
}

ValidationReport validate_unitary(const UnitaryOp& u) {
    ValidationReport rep;
    const ComplexMatrix& m = u.matrix();
    double dev = (m.adjoint() * m).max_abs_diff(ComplexMatrix::identity(m.rows()));
    if (dev > kUnitaryTol) rep.violations.push_back({"U^dag U differs from identity", dev});
    rep.ok = rep.violations.empty();
    return rep;
}

PureState relabel(const PureState& s, const std::vector<std::string>& labels) {
    if (labels.size() != s.layout().factor_count()) {
        throw LabelError("relabel needs one label per factor");
    }
    std::vector<SubsystemFactor> factors;
    factors.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        factors.push_back({labels[i], s.layout().factor(i).dim});
    }
    return PureState(s.amplitudes(), SubsystemLayout(std::move(factors)));
}

PureState random_pure_state(const SubsystemLayout& layout, RandomSource& rng) {
    std::vector<cxd> amps(layout.total_dim());
    for (auto& a : amps) {
        double re = rng.normal();
        double im = rng.normal();
        a = cxd(re, im);
    }
    return PureState::normalized(std::move(amps), layout);
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("eigenvalues require a square matrix");
    std::size_t n = m.rows();
    // Work on the Hermitian part so slightly asymmetric input stays sane.
    ComplexMatrix a = (m + m.adjoint()).scaled(0.5);
    if (n == 1) return {a(0, 0).real()};

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off_sq = 0.0, diag_sq = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            diag_sq += std::norm(a(p, p));
            for (std::size_t q = p + 1; q < n; ++q) off_sq += std::norm(a(p, q));
        }
        if (std::sqrt(off_sq) <= 1e-15 * (1.0 + std::sqrt(diag_sq))) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                cxd apq = a(p, q);
                double aa = std::abs(apq);
                if (aa < 1e-300) continue;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                cxd phase = apq / aa;  // e^{i phi}

                // Rotation angle from the phase-flattened real 2x2 block
                // [[app, aa], [aa, aqq]]; smaller-magnitude root of
                // t^2 - 2*theta*t - 1 = 0.
                double theta = (aqq - app) / (2.0 * aa);
                double t;
                if (theta >= 0.0) {
                    t = -1.0 / (theta + std::sqrt(theta * theta + 1.0));
                } else {
                    t = 1.0 / (-theta + std::sqrt(theta * theta + 1.0));
                }
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                cxd ephi_conj = std::conj(phase);
                // Columns p,q of A <- A*J with J = diag(1, e^{-i phi}) * R.
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    cxd akp = a(k, p);
                    cxd akq = a(k, q);
                    cxd np = c * akp + s * ephi_conj * akq;
                    cxd nq = -s * akp + c * ephi_conj * akq;
                    a(k, p) = np;
                    a(p, k) = std::conj(np);
                    a(k, q) = nq;
                    a(q, k) = std::conj(nq);
                }
                double app_new = c * c * app + 2.0 * s * c * aa + s * s * aqq;
                double aqq_new = s * s * app - 2.0 * s * c * aa + c * c * aqq;
                a(p, p) = app_new;
                a(q, q) = aqq_new;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eigs(n);
    for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i).real();
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw ShapeError("trace distance dimension mismatch");
    std::vector<double> eigs = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
    double sum = 0.0;
    for (double e : eigs) sum += std::abs(e);
    return 0.5 * sum;
}

}  // namespace qpol
