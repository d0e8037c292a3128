#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sqa/perturbation.hpp"

using namespace sqa;

TEST_CASE("epsilon of s") {
    CHECK(epsilon_of_s(0.0) == 0.0);
    CHECK(epsilon_of_s(0.3) == Catch::Approx(3.0 / 7.0).margin(1e-15));
    CHECK(epsilon_of_s(0.5) == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(epsilon_of_s(1.0), ConfigError);
    CHECK_THROWS_AS(epsilon_of_s(1.5), ConfigError);
    CHECK_THROWS_AS(epsilon_of_s(-0.1), ConfigError);
}

TEST_CASE("expansion amplitudes match hand-computed values") {
    // n=4, s*=0.5 (eps=1), unit level spacing, sum_h=0.6, sum_J=-0.4;
    // every amplitude evaluated independently by hand.
    PerturbationParams p;
    p.n = 4;
    p.s_star = 0.5;
    p.sum_h = 0.6;
    p.sum_J = -0.4;
    const auto t = perturbative_terms(p);

    CHECK(t.a1_1 == Catch::Approx(0.3).margin(1e-15));
    CHECK(t.a1_2 == Catch::Approx(-0.081649658092773).margin(1e-14));
    CHECK(t.a2_0 == Catch::Approx(-0.045833333333333).margin(1e-14));
    CHECK(t.a2_1 == Catch::Approx(-0.42).margin(1e-14));
    CHECK(t.a2_2 == Catch::Approx(0.032019508445036).margin(1e-14));
    CHECK(t.a2_3 == Catch::Approx(-0.103670068381445).margin(1e-14));
    CHECK(t.a2_4 == Catch::Approx(0.48).margin(1e-14));

    const auto state = perturbative_coefficients(p);
    CHECK(state.normalized);
    CHECK(state.c[0] == Catch::Approx(0.882714307840168).margin(1e-12));
    CHECK(state.c[1] == Catch::Approx(-0.111013851815707).margin(1e-12));
    CHECK(state.c[2] == Catch::Approx(-0.045913617321543).margin(1e-12));
    CHECK(state.c[3] == Catch::Approx(-0.095906780075183).margin(1e-12));
    CHECK(state.c[4] == Catch::Approx(0.444055407262827).margin(1e-12));
}

TEST_CASE("single-excitation amplitude at the documented operating point") {
    PerturbationParams p;
    p.n = 35;
    p.s_star = 0.3;
    p.sum_h = 1.22;
    p.sum_J = 0.0;
    const auto t = perturbative_terms(p);
    CHECK(t.a1_1 == Catch::Approx(0.08837898778018202).margin(1e-14));
}

TEST_CASE("coefficient limits and structure") {
    SECTION("unperturbed limit") {
        PerturbationParams p;
        p.n = 8;
        p.s_star = 0.0;
        p.sum_h = 3.0;
        p.sum_J = -2.0;
        const auto state = perturbative_coefficients(p);
        CHECK(state.c[0] == Catch::Approx(1.0).margin(1e-15));
        for (int k = 1; k <= 4; ++k) CHECK(state.c[static_cast<std::size_t>(k)] == 0.0);
    }
    SECTION("vanishing field sum kills the odd levels") {
        PerturbationParams p;
        p.n = 8;
        p.s_star = 0.2;
        p.sum_h = 0.0;
        p.sum_J = 1.7;
        const auto t = perturbative_terms(p);
        CHECK(t.a1_1 == 0.0);
        CHECK(t.a2_1 == 0.0);
        CHECK(t.a2_3 == 0.0);
    }
    SECTION("normalization is exact") {
        PerturbationParams p;
        p.n = 12;
        p.s_star = 0.35;
        p.sum_h = 0.9;
        p.sum_J = -4.2;
        const auto state = perturbative_coefficients(p);
        double norm2 = 0.0;
        for (const double c : state.c) norm2 += c * c;
        CHECK(norm2 == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("first order drops every second-order amplitude") {
        PerturbationParams p;
        p.n = 6;
        p.s_star = 0.25;
        p.sum_h = 1.1;
        p.sum_J = 2.2;
        p.order = 1;
        const auto t = perturbative_terms(p);
        CHECK(t.a2_0 == 0.0);
        CHECK(t.a2_1 == 0.0);
        CHECK(t.a2_2 == 0.0);
        CHECK(t.a2_3 == 0.0);
        CHECK(t.a2_4 == 0.0);
        const auto state = perturbative_coefficients(p);
        CHECK(state.c[3] == 0.0);
        CHECK(state.c[4] == 0.0);
    }
    SECTION("levels that do not exist get zero weight") {
        PerturbationParams p;
        p.n = 3;
        p.s_star = 0.3;
        p.sum_h = 1.0;
        p.sum_J = 1.0;
        const auto state = perturbative_coefficients(p);
        CHECK(state.c[4] == 0.0);
        p.n = 2;
        const auto smaller = perturbative_coefficients(p);
        CHECK(smaller.c[3] == 0.0);
        CHECK(smaller.c[4] == 0.0);
    }
    SECTION("combinatorial weight overrides are honored") {
        PerturbationParams p;
        p.n = 8;
        p.s_star = 0.3;
        p.sum_h = 1.0;
        p.sum_J = 2.0;
        const auto base = perturbative_terms(p);
        p.gamma3 = 2.0 / std::sqrt(detail::binomial(8, 3));
        p.gamma4 = 3.0 / std::sqrt(detail::binomial(8, 4));
        const auto scaled = perturbative_terms(p);
        CHECK(scaled.a2_3 == Catch::Approx(2.0 * base.a2_3).margin(1e-14));
        CHECK(scaled.a2_4 == Catch::Approx(3.0 * base.a2_4).margin(1e-14));
    }
    SECTION("validation") {
        PerturbationParams p;
        p.n = 1;
        CHECK_THROWS_AS(perturbative_terms(p), ConfigError);
        p.n = 4;
        p.order = 3;
        CHECK_THROWS_AS(perturbative_terms(p), ConfigError);
        p.order = 2;
        p.level_spacing = 0.0;
        CHECK_THROWS_AS(perturbative_terms(p), ConfigError);
    }
}

TEST_CASE("Gaussian sum sampling") {
    SECTION("degenerate sigmas return the means exactly") {
        GaussianSumStats stats;
        stats.sigma_h = 0.0;
        stats.sigma_J = 0.0;
        const auto [sh, sj] = clt_sample_sums(stats, 123);
        CHECK(sh == stats.mean_h);
        CHECK(sj == stats.mean_J);
    }
    SECTION("determinism") {
        const GaussianSumStats stats;
        const auto a = clt_sample_sums(stats, 7);
        const auto b = clt_sample_sums(stats, 7);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
        const auto c = clt_sample_sums(stats, 8);
        CHECK(a.first != c.first);
    }
    SECTION("sample moments match the configured Gaussians") {
        const GaussianSumStats stats;  // mean_J=-0.007, sigma_J=14, mean_h=1.22, sigma_h=0.08
        const int draws = 100000;
        double mh = 0.0, mj = 0.0;
        for (int i = 0; i < draws; ++i) {
            const auto [sh, sj] = clt_sample_sums(stats, derive_seed(99, i));
            mh += sh;
            mj += sj;
        }
        mh /= draws;
        mj /= draws;
        CHECK(std::abs(mh - stats.mean_h) < 3.0 * stats.sigma_h / std::sqrt(double(draws)));
        CHECK(std::abs(mj - stats.mean_J) < 3.0 * stats.sigma_J / std::sqrt(double(draws)));
    }
    SECTION("negative sigma is rejected") {
        GaussianSumStats stats;
        stats.sigma_h = -1.0;
        CHECK_THROWS_AS(clt_sample_sums(stats, 1), ConfigError);
    }
}

TEST_CASE("fitting the instance-sum Gaussians") {
    SECTION("deterministic disorder gives zero widths") {
        const auto stats = fit_sum_stats(10, 0.03, 0.0, 0.0, 200, 5);
        CHECK(stats.mean_h == Catch::Approx(0.3).margin(1e-12));
        CHECK(stats.sigma_h == Catch::Approx(0.0).margin(1e-12));
        CHECK(stats.mean_J == 0.0);
        CHECK(stats.sigma_J == 0.0);
    }
    SECTION("coupling-sum width matches the uniform-sum prediction") {
        // sum of binom(35,2)=595 Uniform[-1,1] draws: sigma = sqrt(595/3).
        const auto stats = fit_sum_stats(35, 0.01, 0.05, 1.0, 2000, 11);
        CHECK(stats.sigma_J == Catch::Approx(std::sqrt(595.0 / 3.0)).margin(0.7));
        CHECK(stats.mean_h == Catch::Approx(0.35).margin(0.02));
        CHECK(stats.sigma_h == Catch::Approx(0.05 * std::sqrt(35.0 / 3.0)).margin(0.015));
        CHECK(std::abs(stats.mean_J) < 1.0);
    }
    SECTION("sample-size floor") {
        CHECK_THROWS_AS(fit_sum_stats(8, 0.01, 0.05, 1.0, 99, 1), ConfigError);
    }
}

namespace {

RealVector random_theta(int n, std::uint64_t seed) {
    Rng rng(seed);
    RealVector theta(n);
    for (int i = 0; i < n; ++i) theta(i) = rng.uniform(-1.4, 1.4);
    return theta;
}

}  // namespace

TEST_CASE("dense excitation basis is orthonormal") {
    const int n = 6;
    const ExcitationBasisSpec spec{n, random_theta(n, 42), 4};
    std::vector<Vector> basis;
    for (int k = 0; k <= 4; ++k) basis.push_back(excitation_state_dense(spec, k));

    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const double expected = a == b ? 1.0 : 0.0;
            CHECK(std::abs(basis[a].dot(basis[b])) == Catch::Approx(expected).margin(1e-10));
        }

    // The zero-excitation member is the rotated product ground state.
    const Vector phi0 = rotated_initial_ground_state(spec.theta).amplitudes();
    CHECK((basis[0] - phi0).norm() < 1e-12);
}

TEST_CASE("polynomial overlap equals the dense inner product") {
    for (const int n : {5, 8}) {
        const ExcitationBasisSpec spec{n, random_theta(n, 7 + n), 4};
        Rng rng(1000 + n);
        PerturbativeState state;
        double norm2 = 0.0;
        for (auto& c : state.c) {
            c = rng.uniform(-1.0, 1.0);
            norm2 += c * c;
        }
        for (auto& c : state.c) c /= std::sqrt(norm2);
        state.normalized = true;

        const Vector dense = analytic_ground_state_dense(spec, state);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> target(n);
            std::uint64_t bits = 0;
            for (int i = 0; i < n; ++i) {
                target[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? 1 : -1;
                if (target[static_cast<std::size_t>(i)] == -1)
                    bits |= std::uint64_t(1) << (n - 1 - i);
            }
            const double fast = target_overlap(spec, state, target);
            const double slow = std::norm(dense(static_cast<Eigen::Index>(bits)));
            CHECK(fast == Catch::Approx(slow).margin(1e-10));
        }
    }
}

TEST_CASE("unsteered uniform state overlaps any target at 2^-n") {
    const int n = 7;
    const ExcitationBasisSpec spec{n, RealVector::Zero(n), 4};
    PerturbativeState state;
    state.c = {1.0, 0.0, 0.0, 0.0, 0.0};
    state.normalized = true;
    const std::vector<int> target = {1, -1, -1, 1, -1, 1, 1};
    CHECK(target_overlap(spec, state, target) == Catch::Approx(std::pow(2.0, -n)).margin(1e-14));
}

TEST_CASE("target overlap input validation") {
    const ExcitationBasisSpec spec{4, RealVector::Zero(4), 4};
    PerturbativeState state;
    state.c = {1.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(target_overlap(spec, state, {1, -1, 1}), ConfigError);
    CHECK_THROWS_AS(target_overlap(spec, state, {1, -1, 0, 1}), ConfigError);
    const ExcitationBasisSpec bad{4, RealVector::Zero(3), 4};
    CHECK_THROWS_AS(target_overlap(bad, state, {1, -1, 1, 1}), ConfigError);
    const ExcitationBasisSpec deep{4, RealVector::Zero(4), 9};
    CHECK_THROWS_AS(target_overlap(deep, state, {1, -1, 1, 1}), ConfigError);
}

namespace {

// Mean analytic overlap over paired draws of (sum_h, sum_J) and a random
// target pattern, steering the first `lg` sites (the first `n_errors` of
// them against the target).
double mean_sweep_overlap(int n, double s_star, int lg, int n_errors, double omega_units,
                          std::uint64_t master, int draws) {
    const GaussianSumStats stats;
    const double mag = SteeringAngle::from_omega_units(omega_units, n).radians;
    double acc = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto [sum_h, sum_J] = clt_sample_sums(stats, derive_seed(master, 2 * d));
        Rng rng(derive_seed(master, 2 * d + 1));
        std::vector<int> target(static_cast<std::size_t>(n));
        for (auto& s : target) s = rng.uniform() < 0.5 ? 1 : -1;
        RealVector theta = RealVector::Zero(n);
        for (int i = 0; i < lg; ++i) {
            const int sign = i < n_errors ? -target[static_cast<std::size_t>(i)]
                                          : target[static_cast<std::size_t>(i)];
            theta(i) = mag * sign;
        }
        PerturbationParams p;
        p.n = n;
        p.s_star = s_star;
        p.sum_h = sum_h;
        p.sum_J = sum_J;
        acc += target_overlap(ExcitationBasisSpec{n, theta, 4},
                              perturbative_coefficients(p), target);
    }
    return acc / draws;
}

}  // namespace

TEST_CASE("fully correct steering raises the target overlap with guess size") {
    // Per guessed site the zero-excitation factor grows from 1/2 to
    // (1+sin Theta)/2, so the mean P must climb monotonically in guess size.
    for (const double units : {0.3, 0.8, 1.0}) {
        double previous = -1.0;
        for (const int lg : {0, 2, 4, 6, 8, 10}) {
            const double overlap = mean_sweep_overlap(35, 0.3, lg, 0, units, 77, 20);
            CHECK(overlap > previous);
            previous = overlap;
        }
    }
}

TEST_CASE("early-anneal sweep reproduces the error-robustness orderings") {
    // With one wrong assignment, gentle steering beats strong steering for
    // all guess sizes below a fifth of the system; at a fixed guess of 7,
    // full-angle steering loses to 0.3 of the full angle until every
    // assignment is correct, then wins.
    for (int lg = 1; lg <= 6; ++lg)
        CHECK(mean_sweep_overlap(35, 0.3, lg, 1, 0.3, 77, 20) >
              mean_sweep_overlap(35, 0.3, lg, 1, 0.8, 77, 20));
    for (int correct = 0; correct < 7; ++correct)
        CHECK(mean_sweep_overlap(35, 0.3, 7, 7 - correct, 1.0, 77, 20) <
              mean_sweep_overlap(35, 0.3, 7, 7 - correct, 0.3, 77, 20));
    CHECK(mean_sweep_overlap(35, 0.3, 7, 0, 1.0, 77, 20) >
          mean_sweep_overlap(35, 0.3, 7, 0, 0.3, 77, 20));
}

TEST_CASE("overlap is continuous in the steering angle") {
    // Empirical Lipschitz bound on a fixed fully-correct configuration; the
    // finite-difference slope never exceeds a few times the overlap scale
    // divided by the angle range, far below the pinned ceiling.
    const int n = 35;
    PerturbationParams p;
    p.n = n;
    p.s_star = 0.3;
    p.sum_h = 1.22;
    p.sum_J = -0.007;
    const auto state = perturbative_coefficients(p);

    Rng rng(9);
    std::vector<int> target(n);
    for (auto& s : target) s = rng.uniform() < 0.5 ? 1 : -1;

    const double full_angle = omega(n);
    const int lg = 7;
    double previous = -1.0;
    const int grid = 200;
    double max_slope = 0.0;
    for (int j = 0; j <= grid; ++j) {
        const double mag = full_angle * static_cast<double>(j) / grid;
        RealVector theta = RealVector::Zero(n);
        for (int i = 0; i < lg; ++i) theta(i) = mag * target[static_cast<std::size_t>(i)];
        const double overlap = target_overlap(ExcitationBasisSpec{n, theta, 4}, state, target);
        if (j > 0)
            max_slope = std::max(max_slope, std::abs(overlap - previous) / (full_angle / grid));
        previous = overlap;
    }
    CHECK(max_slope < 1e-8);
}

TEST_CASE("analytic state matches dense diagonalization at small s*") {
    SECTION("exact at the unperturbed endpoint") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto inst = gen_ising(IsingParams{.n = 8}, seed);
            CHECK(validate_against_exact(inst, RealVector::Zero(8), 0.0) ==
                  Catch::Approx(1.0).margin(1e-9));
        }
    }
    SECTION("overlap decays as s* grows") {
        // Frozen oracle means over seeds 1..20 (n=8 defaults): 0.9986 at
        // s*=0.05, 0.9912 at 0.10, 0.7274 at 0.30, 0.3594 at 0.45.
        double m005 = 0.0, m010 = 0.0, m030 = 0.0, m045 = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto inst = gen_ising(IsingParams{.n = 8}, seed);
            const RealVector theta = RealVector::Zero(8);
            m005 += validate_against_exact(inst, theta, 0.05);
            m010 += validate_against_exact(inst, theta, 0.10);
            m030 += validate_against_exact(inst, theta, 0.30);
            m045 += validate_against_exact(inst, theta, 0.45);
        }
        m005 /= 20.0;
        m010 /= 20.0;
        m030 /= 20.0;
        m045 /= 20.0;
        CHECK(m005 == Catch::Approx(0.998647).margin(5e-4));
        CHECK(m010 == Catch::Approx(0.991202).margin(5e-4));
        CHECK(m030 == Catch::Approx(0.727359).margin(5e-3));
        CHECK(m045 == Catch::Approx(0.359359).margin(5e-3));
        CHECK(m005 > m010);
        CHECK(m010 > m030);
        CHECK(m030 > m045);
    }
    SECTION("first-order truncation stays accurate very early") {
        double mean = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto inst = gen_ising(IsingParams{.n = 8}, seed);
            mean += validate_against_exact(inst, RealVector::Zero(8), 0.1, 1);
        }
        mean /= 20.0;
        CHECK(mean >= 0.95);
        CHECK(mean == Catch::Approx(0.994746).margin(2e-3));
    }
    SECTION("dimension cap") {
        IsingInstance big;
        big.n = 13;
        big.h = RealVector::Zero(13);
        big.j = RealMatrix::Zero(13, 13);
        CHECK_THROWS_AS(validate_against_exact(big, RealVector::Zero(13), 0.1), ConfigError);
    }
}

TEST_CASE("second-order amplitudes vanish faster than first order as s* shrinks") {
    // Per coefficient the ratio |second|/|first| scales linearly in
    // eps = s*/(1-s*), so early enough in the anneal first order dominates.
    // With wide coupling-sum draws the crossover sits well below s*=0.1:
    // the second-order single-excitation amplitude carries an extra
    // sum_J * (4 - 1/sqrt(n)) factor, so dominance at s*=0.1 only holds for
    // |sum_J| < ~2.3 — documented here rather than assumed.
    const GaussianSumStats stats;
    for (int draw = 0; draw < 20; ++draw) {
        const auto [sum_h, sum_J] = clt_sample_sums(stats, derive_seed(55, draw));
        PerturbationParams p;
        p.n = 35;
        p.sum_h = sum_h;
        p.sum_J = sum_J;

        p.s_star = 0.001;
        const auto tiny = perturbative_terms(p);
        CHECK(std::abs(tiny.a2_1) < std::abs(tiny.a1_1));
        CHECK(std::abs(tiny.a2_2) < std::abs(tiny.a1_2));

        // Linear-in-eps scaling of the dominance ratio, exact by structure.
        p.s_star = 0.01;
        const auto small = perturbative_terms(p);
        const double scale = epsilon_of_s(0.01) / epsilon_of_s(0.001);
        CHECK(std::abs(small.a2_1 / small.a1_1) ==
              Catch::Approx(scale * std::abs(tiny.a2_1 / tiny.a1_1)).epsilon(1e-12));
        CHECK(std::abs(small.a2_2 / small.a1_2) ==
              Catch::Approx(scale * std::abs(tiny.a2_2 / tiny.a1_2)).epsilon(1e-12));
    }

    // Boundary documentation: at s*=0.1 a typical coupling-sum magnitude
    // breaks per-coefficient dominance.
    PerturbationParams p;
    p.n = 35;
    p.s_star = 0.1;
    p.sum_h = 1.22;
    p.sum_J = 14.0;
    const auto t = perturbative_terms(p);
    CHECK(std::abs(t.a2_1) > std::abs(t.a1_1));
}
