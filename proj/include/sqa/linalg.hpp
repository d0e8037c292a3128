#pragma once

// Dense Hermitian linear algebra on n-qubit Hilbert spaces.
//
// Conventions used throughout the library:
//   * Qubit 0 is the MOST significant bit of a computational-basis index
//     (big-endian).  For basis index b, the bit of qubit i is
//     (b >> (n-1-i)) & 1.
//   * Bit value 0 is the sigma_z = +1 (spin up) eigenstate.
//   * Eigensystems are returned with eigenvalues ascending and each
//     eigenvector's largest-magnitude component made real and positive
//     (ties broken toward the lowest index), so decompositions are
//     reproducible run to run.
//
// The eigensolver is LAPACK's divide-and-conquer routine (dsyevd / zheevd via
// LAPACKE), which is substantially faster than the portable fallbacks on the
// dense 2^n x 2^n matrices this library produces.  Real-symmetric input is
// detected and dispatched to the real routine.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace sqa {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace detail {

inline int qubit_count_for_dim(Eigen::Index dim, const char* what) {
    if (dim < 1) throw std::invalid_argument(std::string(what) + ": dimension must be positive");
    int n = 0;
    Eigen::Index d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw std::invalid_argument(std::string(what) + ": dimension must be a power of two");
        d /= 2;
        ++n;
    }
    return n;
}

}  // namespace detail

// Dense Hermitian operator on an n-qubit space.  Validated on construction:
// square, power-of-two dimension, equal to its own conjugate transpose.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw std::invalid_argument("HermitianOperator: matrix must be square");
        n_qubits_ = detail::qubit_count_for_dim(m_.rows(), "HermitianOperator");
        const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
        const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * scale)
            throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
    }

    // Diagonal operators are Hermitian by construction; no dense check needed.
    static HermitianOperator from_diagonal(const RealVector& d) {
        HermitianOperator op;
        op.n_qubits_ = detail::qubit_count_for_dim(d.size(), "HermitianOperator");
        op.m_ = Matrix::Zero(d.size(), d.size());
        op.m_.diagonal() = d.cast<Complex>();
        return op;
    }

    Eigen::Index dim() const { return m_.rows(); }
    int n_qubits() const { return n_qubits_; }
    const Matrix& matrix() const { return m_; }

private:
    HermitianOperator() = default;
    Matrix m_;
    int n_qubits_ = 0;
};

// Normalized state vector on an n-qubit space.
class StateVector {
public:
    explicit StateVector(Vector amplitudes) : v_(std::move(amplitudes)) {
        n_qubits_ = detail::qubit_count_for_dim(v_.size(), "StateVector");
        if (std::abs(v_.norm() - 1.0) > 1e-8)
            throw std::invalid_argument("StateVector: amplitudes must be normalized");
    }

    // Computational basis state |index>.
    static StateVector basis(Eigen::Index dim, Eigen::Index index) {
        if (index < 0 || index >= dim) throw std::invalid_argument("StateVector::basis: index out of range");
        Vector v = Vector::Zero(dim);
        v(index) = 1.0;
        return StateVector(std::move(v));
    }

    Eigen::Index dim() const { return v_.size(); }
    int n_qubits() const { return n_qubits_; }
    const Vector& amplitudes() const { return v_; }
    Complex amplitude(Eigen::Index i) const { return v_(i); }

private:
    Vector v_;
    int n_qubits_ = 0;
};

// Eigendecomposition of a Hermitian operator: eigenvalues ascending,
// eigenvectors orthonormal columns with the deterministic phase convention.
struct EigenSystem {
    RealVector eigenvalues;
    Matrix eigenvectors;
};

namespace detail {

inline void fix_phases(Matrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double mag = std::abs(vectors(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        const Complex z = vectors(arg, c);
        if (best > 0.0) vectors.col(c) *= std::conj(z) / std::abs(z);
    }
}

inline bool is_real(const Matrix& m) {
    return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

[[noreturn]] inline void eigensolver_failure(int info) {
    throw std::runtime_error("eigh: LAPACK eigensolver failed (info=" + std::to_string(info) + ")");
}

}  // namespace detail

// Full eigendecomposition.  Real-symmetric input takes the dsyevd path; the
// eigenvector matrix is returned complex either way for a uniform interface.
inline EigenSystem eigh(const HermitianOperator& op) {
    const auto n = static_cast<lapack_int>(op.dim());
    EigenSystem out;
    out.eigenvalues.resize(n);
    if (detail::is_real(op.matrix())) {
        RealMatrix a = op.matrix().real();
        const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.eigenvalues.data());
        if (info != 0) detail::eigensolver_failure(info);
        out.eigenvectors = a.cast<Complex>();
    } else {
        Matrix a = op.matrix();
        const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.eigenvalues.data());
        if (info != 0) detail::eigensolver_failure(info);
        out.eigenvectors = std::move(a);
    }
    detail::fix_phases(out.eigenvectors);
    return out;
}

// Eigenvalues only (ascending).  Cheaper than eigh when vectors are unused,
// which is the common case along spectrum traces.
inline RealVector eigenvalues(const HermitianOperator& op) {
    const auto n = static_cast<lapack_int>(op.dim());
    RealVector w(n);
    int info;
    if (detail::is_real(op.matrix())) {
        RealMatrix a = op.matrix().real();
        info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    } else {
        Matrix a = op.matrix();
        info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    }
    if (info != 0) detail::eigensolver_failure(info);
    return w;
}

// Largest singular value; for Hermitian operators this is max |lambda|.
inline double spectral_norm(const HermitianOperator& op) {
    const RealVector w = eigenvalues(op);
    return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

inline double frobenius_norm(const HermitianOperator& op) { return op.matrix().norm(); }

// Single-site Pauli operator embedded into the n-qubit space (big-endian
// site order: site 0 acts on the most significant bit).
enum class PauliAxis { X, Y, Z };

inline HermitianOperator embed_single_site(PauliAxis axis, int site, int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("embed_single_site: need at least one qubit");
    if (site < 0 || site >= n_qubits) throw std::invalid_argument("embed_single_site: site out of range");
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    const std::uint64_t mask = std::uint64_t(1) << (n_qubits - 1 - site);
    if (axis == PauliAxis::Z) {
        RealVector d(dim);
        for (Eigen::Index b = 0; b < dim; ++b)
            d(b) = (static_cast<std::uint64_t>(b) & mask) ? -1.0 : 1.0;
        return HermitianOperator::from_diagonal(d);
    }
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        const auto partner = static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ mask);
        if (axis == PauliAxis::X) {
            m(partner, b) = 1.0;
        } else {  // Y: <1|sy|0> = i, <0|sy|1> = -i
            m(partner, b) = (static_cast<std::uint64_t>(b) & mask) ? Complex(0, -1) : Complex(0, 1);
        }
    }
    return HermitianOperator(std::move(m));
}

// Exact propagation by exp(-i H dt) through the full eigendecomposition.
inline StateVector evolve_step(const EigenSystem& es, const StateVector& state, double dt) {
    Vector coeffs = es.eigenvectors.adjoint() * state.amplitudes();
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        coeffs(k) *= std::exp(Complex(0.0, -es.eigenvalues(k) * dt));
    return StateVector(es.eigenvectors * coeffs);
}

inline StateVector evolve_step(const HermitianOperator& op, const StateVector& state, double dt) {
    if (op.dim() != state.dim()) throw std::invalid_argument("evolve_step: dimension mismatch");
    return evolve_step(eigh(op), state, dt);
}

}  // namespace sqa
