#pragma once

// Guess-steered initial Hamiltonians.
//
// A guess assigns each site a value in {-1, 0, +1}: the believed sigma_z
// orientation of the final ground state, or 0 for "no opinion".  The guess
// tilts each transverse-field term by a per-site angle theta_i:
//
//     H0(theta) = sum_i -( cos(theta_i) X_i + sin(theta_i) Z_i ),
//     theta_i   = Theta * sgn(psi_i).
//
// Each site term has eigenvalues -1/+1 for any angle, with ground state
//     g(theta) = cos(pi/4 - theta/2) |up> + sin(pi/4 - theta/2) |down>,
// so the full ground state is the product of the per-site g's.  At theta = 0
// this reduces to the uniform transverse field and |+>^n.
//
// The natural angle scale is Omega(n) = arccos(2^{-n/2}): at Theta = Omega
// a fully guessed product state has its first component matched to the
// uniform-superposition overlap 2^{-n/2}.  Steering angles are quoted in
// units of Omega at the interface level and converted to radians here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sqa/errors.hpp"
#include "sqa/linalg.hpp"
#include "sqa/models.hpp"

namespace sqa {

// Angle scale Omega(n) = arccos(2^{-n/2}).
inline double omega(int n_qubits) {
    if (n_qubits < 1) throw ConfigError("omega: need at least one qubit");
    return std::acos(std::pow(2.0, -0.5 * n_qubits));
}

// Per-site guess in {-1, 0, +1}.  The support is the set of nonzero entries.
class GuessVector {
public:
    explicit GuessVector(Eigen::VectorXi psi) : psi_(std::move(psi)) {
        for (Eigen::Index i = 0; i < psi_.size(); ++i)
            if (psi_(i) < -1 || psi_(i) > 1)
                throw ConfigError("GuessVector: entries must be -1, 0 or +1");
    }

    static GuessVector empty(int n) { return GuessVector(Eigen::VectorXi::Zero(n)); }

    int size() const { return static_cast<int>(psi_.size()); }
    int support_size() const { return static_cast<int>((psi_.array() != 0).count()); }
    int operator()(int i) const { return psi_(i); }
    const Eigen::VectorXi& values() const { return psi_; }

private:
    Eigen::VectorXi psi_;
};

// Steering angle, carried in radians; constructed from Omega units.
struct SteeringAngle {
    double radians = 0.0;

    static SteeringAngle from_omega_units(double units, int n_qubits) {
        return SteeringAngle{units * omega(n_qubits)};
    }
    double omega_units(int n_qubits) const { return radians / omega(n_qubits); }
};

// theta_i = Theta * sgn(psi_i); unguessed sites keep the plain transverse field.
inline RealVector theta_vector(const GuessVector& guess, SteeringAngle angle) {
    RealVector theta(guess.size());
    for (int i = 0; i < guess.size(); ++i) theta(i) = angle.radians * guess(i);
    return theta;
}

// Dense assembly of H0(theta); real symmetric for all angles.
inline HermitianOperator rotated_initial_hamiltonian(const RealVector& theta) {
    const int n = static_cast<int>(theta.size());
    if (n < 1) throw ConfigError("rotated_initial_hamiltonian: need at least one site");
    const Eigen::Index dim = Eigen::Index(1) << n;
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double diag = 0.0;
        for (int i = 0; i < n; ++i) {
            diag -= std::sin(theta(i)) * spin_of(static_cast<std::uint64_t>(b), i, n);
            const auto partner =
                static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ (std::uint64_t(1) << (n - 1 - i)));
            m(partner, b) -= std::cos(theta(i));
        }
        m(b, b) = diag;
    }
    return HermitianOperator(std::move(m));
}

// Per-site ground/excited amplitudes of -(cos(t) X + sin(t) Z) in the
// (up, down) basis.  g has eigenvalue -1, e has +1; <e|Z|g> = -cos(t).
struct SiteState {
    double up;
    double down;
};

inline SiteState site_ground(double theta) {
    const double beta = 0.25 * M_PI - 0.5 * theta;
    return {std::cos(beta), std::sin(beta)};
}

inline SiteState site_excited(double theta) {
    const double beta = 0.25 * M_PI - 0.5 * theta;
    return {-std::sin(beta), std::cos(beta)};
}

// Product ground state of H0(theta), assembled site by site (big-endian).
inline StateVector rotated_initial_ground_state(const RealVector& theta) {
    const int n = static_cast<int>(theta.size());
    if (n < 1) throw ConfigError("rotated_initial_ground_state: need at least one site");
    const Eigen::Index dim = Eigen::Index(1) << n;
    Vector v(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double amp = 1.0;
        for (int i = 0; i < n; ++i) {
            const SiteState g = site_ground(theta(i));
            amp *= ((static_cast<std::uint64_t>(b) >> (n - 1 - i)) & 1) ? g.down : g.up;
        }
        v(b) = amp;
    }
    return StateVector(std::move(v));
}

// Guess heuristic: pick the support_size sites with the largest |h| (ties
// toward the lower index) and guess each anti-aligned with its field,
// psi_i = -sgn(h_i).
inline GuessVector highest_field_guess(const IsingInstance& inst, int support_size) {
    if (support_size < 0 || support_size > inst.n)
        throw ConfigError("highest_field_guess: support size out of range");
    std::vector<int> order(static_cast<std::size_t>(inst.n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(inst.h(a)) > std::abs(inst.h(b)); });
    Eigen::VectorXi psi = Eigen::VectorXi::Zero(inst.n);
    for (int k = 0; k < support_size; ++k) {
        const int i = order[static_cast<std::size_t>(k)];
        psi(i) = inst.h(i) > 0 ? -1 : (inst.h(i) < 0 ? 1 : 0);
    }
    return GuessVector(std::move(psi));
}

// Spin pattern sigma in {-1,+1}^n of a computational basis state.
inline Eigen::VectorXi spins_of_basis(std::uint64_t basis_index, int n) {
    Eigen::VectorXi s(n);
    for (int i = 0; i < n; ++i) s(i) = static_cast<int>(spin_of(basis_index, i, n));
    return s;
}

// Guess built from a known target pattern: correct on the support except at
// the listed error sites, which are flipped.  Error sites must lie in the
// support.
inline GuessVector guess_from_pattern(const Eigen::VectorXi& target_spins, const std::vector<int>& support,
                                      const std::vector<int>& error_sites) {
    const int n = static_cast<int>(target_spins.size());
    Eigen::VectorXi psi = Eigen::VectorXi::Zero(n);
    for (int i : support) {
        if (i < 0 || i >= n) throw ConfigError("guess_from_pattern: support index out of range");
        psi(i) = target_spins(i);
    }
    for (int i : error_sites) {
        if (psi(i) == 0) throw ConfigError("guess_from_pattern: error site outside the support");
        psi(i) = -psi(i);
    }
    return GuessVector(std::move(psi));
}

// A guess is correct when every nonzero entry matches some member of the
// ground manifold of the instance's cost Hamiltonian.
inline bool guess_matches_ground_state(const GuessVector& guess, const DiagonalHamiltonian& ham) {
    const int n = ham.n_qubits();
    const auto gm = ground_state_of_diagonal(ham);
    for (const auto index : gm.indices) {
        bool all = true;
        for (int i = 0; i < n && all; ++i)
            if (guess(i) != 0 && guess(i) != static_cast<int>(spin_of(static_cast<std::uint64_t>(index), i, n)))
                all = false;
        if (all) return true;
    }
    return false;
}

}  // namespace sqa
