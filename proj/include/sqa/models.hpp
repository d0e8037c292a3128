#pragma once

// Problem models: random-field Ising instances and uniquely-satisfiable
// 1-in-3 SAT instances, together with their diagonal cost Hamiltonians.
//
// Spin convention (fixed across the library): computational-basis bit 0 is
// sigma_z = +1 (spin up); bit 1 is sigma_z = -1 (spin down).  For SAT
// problems a variable is TRUE when its qubit is in the bit-1 state.  Qubit i
// occupies bit (n-1-i) of the basis index (big-endian).

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqa/errors.hpp"
#include "sqa/linalg.hpp"
#include "sqa/rng.hpp"

namespace sqa {

// Spin value of qubit i in basis state b: +1 for bit 0, -1 for bit 1.
inline double spin_of(std::uint64_t basis_index, int qubit, int n_qubits) {
    return (basis_index >> (n_qubits - 1 - qubit)) & 1 ? -1.0 : 1.0;
}

// Diagonal cost operator: one energy per computational basis state.
struct DiagonalHamiltonian {
    RealVector energies;

    Eigen::Index dim() const { return energies.size(); }
    int n_qubits() const { return detail::qubit_count_for_dim(energies.size(), "DiagonalHamiltonian"); }
    HermitianOperator to_operator() const { return HermitianOperator::from_diagonal(energies); }
};

// Ground manifold of a diagonal operator: all indices whose energy ties the
// minimum within an absolute tolerance of 1e-12.
struct GroundManifold {
    std::vector<Eigen::Index> indices;
    double energy = 0.0;

    int degeneracy() const { return static_cast<int>(indices.size()); }
};

inline GroundManifold ground_state_of_diagonal(const DiagonalHamiltonian& h) {
    GroundManifold gm;
    gm.energy = h.energies.minCoeff();
    for (Eigen::Index b = 0; b < h.energies.size(); ++b)
        if (h.energies(b) <= gm.energy + 1e-12) gm.indices.push_back(b);
    return gm;
}

// ---------------------------------------------------------------------------
// Random-field Ising model
// ---------------------------------------------------------------------------

struct IsingParams {
    int n = 8;
    double h_mean = 0.01;  // common longitudinal bias
    double w = 0.05;       // half-width of the per-site field jitter
    double j_scale = 1.0;  // couplings drawn uniformly from [-j_scale, j_scale]
};

struct IsingInstance {
    int n = 0;
    RealVector h;    // per-site fields, size n
    RealMatrix j;    // couplings, strictly upper triangular (j > i)
    IsingParams params;
    std::uint64_t seed = 0;
};

// Draw order is part of the format: fields h_0..h_{n-1} first, then couplings
// J_ij for i < j in row-major order.  Changing it would silently change every
// seeded ensemble.
inline IsingInstance gen_ising(const IsingParams& params, std::uint64_t seed) {
    if (params.n < 1) throw ConfigError("gen_ising: need at least one site");
    if (params.w < 0 || params.j_scale < 0) throw ConfigError("gen_ising: widths must be non-negative");
    IsingInstance inst;
    inst.n = params.n;
    inst.params = params;
    inst.seed = seed;
    Rng rng(seed);
    inst.h.resize(params.n);
    for (int i = 0; i < params.n; ++i) inst.h(i) = params.h_mean + rng.uniform(-params.w, params.w);
    inst.j = RealMatrix::Zero(params.n, params.n);
    for (int i = 0; i < params.n; ++i)
        for (int k = i + 1; k < params.n; ++k) inst.j(i, k) = rng.uniform(-params.j_scale, params.j_scale);
    return inst;
}

// E(b) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j with s_i read off the bits.
inline DiagonalHamiltonian ising_hamiltonian(const IsingInstance& inst) {
    const Eigen::Index dim = Eigen::Index(1) << inst.n;
    RealVector e(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double energy = 0.0;
        for (int i = 0; i < inst.n; ++i) {
            const double si = spin_of(static_cast<std::uint64_t>(b), i, inst.n);
            energy += inst.h(i) * si;
            for (int k = i + 1; k < inst.n; ++k)
                energy += inst.j(i, k) * si * spin_of(static_cast<std::uint64_t>(b), k, inst.n);
        }
        e(b) = energy;
    }
    return DiagonalHamiltonian{std::move(e)};
}

// ---------------------------------------------------------------------------
// Uniquely satisfiable 1-in-3 SAT
// ---------------------------------------------------------------------------

// A clause holds three distinct variable indices (stored ascending) and is
// satisfied when EXACTLY ONE of them is true.  There are no negated literals.
struct SatInstance {
    int n = 0;
    std::vector<std::array<int, 3>> clauses;
    std::uint64_t seed = 0;
};

inline bool clause_satisfied(const std::array<int, 3>& clause, std::uint64_t assignment, int n) {
    int true_count = 0;
    for (int v : clause) true_count += (assignment >> (n - 1 - v)) & 1;
    return true_count == 1;
}

inline int count_satisfying(const SatInstance& inst) {
    const std::uint64_t dim = std::uint64_t(1) << inst.n;
    int count = 0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        bool ok = true;
        for (const auto& c : inst.clauses)
            if (!clause_satisfied(c, b, inst.n)) {
                ok = false;
                break;
            }
        count += ok;
    }
    return count;
}

// Basis index of the unique satisfying assignment.
inline std::uint64_t sat_solution(const SatInstance& inst) {
    const std::uint64_t dim = std::uint64_t(1) << inst.n;
    for (std::uint64_t b = 0; b < dim; ++b) {
        bool ok = true;
        for (const auto& c : inst.clauses)
            if (!clause_satisfied(c, b, inst.n)) {
                ok = false;
                break;
            }
        if (ok) return b;
    }
    throw GenerationError("sat_solution: instance has no satisfying assignment");
}

// Rejection generator: propose random clauses; keep one only if at least one
// assignment still satisfies everything; stop once the count reaches exactly
// one.  Throws GenerationError if the proposal budget runs out first.
inline SatInstance gen_unique_3sat(int n, std::uint64_t seed, int max_attempts = 10000) {
    if (n < 3) throw ConfigError("gen_unique_3sat: need at least three variables");
    if (n > 24) throw ConfigError("gen_unique_3sat: enumeration limited to n <= 24");
    SatInstance inst;
    inst.n = n;
    inst.seed = seed;
    Rng rng(seed);

    std::vector<std::uint64_t> surviving(std::uint64_t(1) << n);
    for (std::uint64_t b = 0; b < surviving.size(); ++b) surviving[b] = b;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (surviving.size() == 1) return inst;
        auto vars = rng.sample_without_replacement(n, 3);
        std::sort(vars.begin(), vars.end());
        const std::array<int, 3> clause{vars[0], vars[1], vars[2]};
        if (std::find(inst.clauses.begin(), inst.clauses.end(), clause) != inst.clauses.end()) continue;
        std::vector<std::uint64_t> kept;
        kept.reserve(surviving.size());
        for (std::uint64_t b : surviving)
            if (clause_satisfied(clause, b, n)) kept.push_back(b);
        if (kept.empty()) continue;  // clause would make the formula unsatisfiable
        inst.clauses.push_back(clause);
        surviving = std::move(kept);
    }
    if (surviving.size() == 1) return inst;
    throw GenerationError("gen_unique_3sat: retry budget exhausted before uniqueness");
}

// Cost per clause: (number of true variables - 1)^2, so satisfying
// assignments cost 0 and each violated clause costs 1 or 4.
inline DiagonalHamiltonian sat_hamiltonian(const SatInstance& inst) {
    const Eigen::Index dim = Eigen::Index(1) << inst.n;
    RealVector e = RealVector::Zero(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double energy = 0.0;
        for (const auto& c : inst.clauses) {
            int true_count = 0;
            for (int v : c) true_count += (static_cast<std::uint64_t>(b) >> (inst.n - 1 - v)) & 1;
            energy += static_cast<double>((true_count - 1) * (true_count - 1));
        }
        e(b) = energy;
    }
    return DiagonalHamiltonian{std::move(e)};
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------
//
// Schema (format_version 1):
//   { "format_version": 1, "kind": "ising", "n": ...,
//     "h": [...], "J": [{"i":., "j":., "value":.}, ...],
//     "meta": {"h_mean":., "W":., "J_s":., "seed":.} }
//   { "format_version": 1, "kind": "sat3", "n": ...,
//     "clauses": [[i,j,k], ...], "meta": {"seed":.} }

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require_field(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("instance file: missing field '") + key + "'");
    return j.at(key);
}

}  // namespace detail

inline Json to_json(const IsingInstance& inst) {
    Json j;
    j["format_version"] = 1;
    j["kind"] = "ising";
    j["n"] = inst.n;
    j["h"] = std::vector<double>(inst.h.data(), inst.h.data() + inst.h.size());
    Json couplings = Json::array();
    for (int i = 0; i < inst.n; ++i)
        for (int k = i + 1; k < inst.n; ++k)
            couplings.push_back(Json{{"i", i}, {"j", k}, {"value", inst.j(i, k)}});
    j["J"] = std::move(couplings);
    j["meta"] = Json{{"h_mean", inst.params.h_mean},
                     {"W", inst.params.w},
                     {"J_s", inst.params.j_scale},
                     {"seed", inst.seed}};
    return j;
}

inline Json to_json(const SatInstance& inst) {
    Json j;
    j["format_version"] = 1;
    j["kind"] = "sat3";
    j["n"] = inst.n;
    Json clauses = Json::array();
    for (const auto& c : inst.clauses) clauses.push_back(std::vector<int>{c[0], c[1], c[2]});
    j["clauses"] = std::move(clauses);
    j["meta"] = Json{{"seed", inst.seed}};
    return j;
}

inline std::string instance_kind(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("instance file: invalid JSON: ") + e.what());
    }
    return detail::require_field(j, "kind").get<std::string>();
}

inline IsingInstance ising_from_json(const Json& j) {
    if (detail::require_field(j, "format_version").get<int>() != 1)
        throw ConfigError("instance file: unsupported format_version");
    if (detail::require_field(j, "kind").get<std::string>() != "ising")
        throw ConfigError("instance file: kind is not 'ising'");
    IsingInstance inst;
    inst.n = detail::require_field(j, "n").get<int>();
    if (inst.n < 1) throw ConfigError("instance file: field 'n' must be positive");
    const auto h = detail::require_field(j, "h").get<std::vector<double>>();
    if (static_cast<int>(h.size()) != inst.n) throw ConfigError("instance file: field 'h' has wrong length");
    inst.h = Eigen::Map<const RealVector>(h.data(), static_cast<Eigen::Index>(h.size()));
    inst.j = RealMatrix::Zero(inst.n, inst.n);
    for (const auto& entry : detail::require_field(j, "J")) {
        const int i = detail::require_field(entry, "i").get<int>();
        const int k = detail::require_field(entry, "j").get<int>();
        if (i < 0 || k < 0 || i >= inst.n || k >= inst.n || i >= k)
            throw ConfigError("instance file: coupling indices must satisfy 0 <= i < j < n");
        inst.j(i, k) = detail::require_field(entry, "value").get<double>();
    }
    const auto& meta = detail::require_field(j, "meta");
    inst.params.n = inst.n;
    inst.params.h_mean = detail::require_field(meta, "h_mean").get<double>();
    inst.params.w = detail::require_field(meta, "W").get<double>();
    inst.params.j_scale = detail::require_field(meta, "J_s").get<double>();
    inst.seed = detail::require_field(meta, "seed").get<std::uint64_t>();
    return inst;
}

inline SatInstance sat_from_json(const Json& j) {
    if (detail::require_field(j, "format_version").get<int>() != 1)
        throw ConfigError("instance file: unsupported format_version");
    if (detail::require_field(j, "kind").get<std::string>() != "sat3")
        throw ConfigError("instance file: kind is not 'sat3'");
    SatInstance inst;
    inst.n = detail::require_field(j, "n").get<int>();
    if (inst.n < 3) throw ConfigError("instance file: field 'n' must be at least 3");
    for (const auto& entry : detail::require_field(j, "clauses")) {
        const auto vars = entry.get<std::vector<int>>();
        if (vars.size() != 3) throw ConfigError("instance file: each clause needs exactly 3 variables");
        std::array<int, 3> clause{vars[0], vars[1], vars[2]};
        for (int v : clause)
            if (v < 0 || v >= inst.n) throw ConfigError("instance file: clause variable out of range");
        if (clause[0] == clause[1] || clause[1] == clause[2] || clause[0] == clause[2])
            throw ConfigError("instance file: clause variables must be distinct");
        inst.clauses.push_back(clause);
    }
    inst.seed = detail::require_field(detail::require_field(j, "meta"), "seed").get<std::uint64_t>();
    return inst;
}

inline std::string serialize_instance(const IsingInstance& inst) { return to_json(inst).dump(2) + "\n"; }
inline std::string serialize_instance(const SatInstance& inst) { return to_json(inst).dump(2) + "\n"; }

inline IsingInstance deserialize_ising(const std::string& text) {
    try {
        return ising_from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("instance file: ") + e.what());
    }
}

inline SatInstance deserialize_sat(const std::string& text) {
    try {
        return sat_from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("instance file: ") + e.what());
    }
}

}  // namespace sqa
