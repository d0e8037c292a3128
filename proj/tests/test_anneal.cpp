#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sqa/anneal.hpp"
#include "sqa/rng.hpp"

using sqa::AnnealPath;
using sqa::DiagonalHamiltonian;
using sqa::NormKind;
using sqa::RealVector;
using sqa::ScheduleProfile;

namespace {

// Single-qubit direct anneal: -X -> Z, everything in closed form.
AnnealPath direct_one_qubit() {
    RealVector z(2);
    z << 1.0, -1.0;
    return AnnealPath(RealVector::Zero(1), DiagonalHamiltonian{z});
}

}  // namespace

TEST_CASE("path endpoints are reproduced exactly", "[anneal]") {
    const auto path = direct_one_qubit();
    REQUIRE((path.at(0.0).matrix() - path.initial().matrix()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((path.at(1.0).matrix() - path.final_hamiltonian().to_operator().matrix()).cwiseAbs().maxCoeff() ==
            0.0);
    REQUIRE_THROWS_AS(path.at(-0.01), sqa::ConfigError);
    REQUIRE_THROWS_AS(path.at(1.01), sqa::ConfigError);

    // dH/ds = Hf - H0 is constant and cached on the path.
    const sqa::Matrix want = path.final_hamiltonian().to_operator().matrix() - path.initial().matrix();
    REQUIRE((path.derivative().matrix() - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("midpoint eigenvalues match the two-level closed form", "[anneal]") {
    const auto path = direct_one_qubit();
    const auto w = sqa::eigenvalues(path.at(0.5));
    REQUIRE(w(0) == Catch::Approx(-std::sqrt(2.0) / 2.0).margin(1e-14));
    REQUIRE(w(1) == Catch::Approx(std::sqrt(2.0) / 2.0).margin(1e-14));
}

TEST_CASE("grid validation accepts only even divisions", "[anneal]") {
    const auto path = direct_one_qubit();
    REQUIRE_THROWS_AS(sqa::spectrum_trace(path, 2, 0.3), sqa::ConfigError);
    REQUIRE_THROWS_AS(sqa::spectrum_trace(path, 2, 0.0), sqa::ConfigError);
    REQUIRE_THROWS_AS(sqa::spectrum_trace(path, 1, 0.01), sqa::ConfigError);
    REQUIRE_THROWS_AS(sqa::spectrum_trace(path, 3, 0.01), sqa::ConfigError);  // k > dim
    const auto trace = sqa::spectrum_trace(path, 2, 0.25);
    REQUIRE(trace.s_grid.size() == 5);
    REQUIRE(trace.s_grid(4) == 1.0);
    REQUIRE(sqa::spectrum_trace(path, 2, 0.01).s_grid.size() == 101);
}

TEST_CASE("direct one-qubit gap follows 2 sqrt((1-s)^2 + s^2)", "[anneal]") {
    const auto trace = sqa::spectrum_trace(direct_one_qubit(), 2, 0.01);
    for (Eigen::Index j = 0; j < trace.s_grid.size(); ++j) {
        const double s = trace.s_grid(j);
        REQUIRE(trace.gap(j) ==
                Catch::Approx(2.0 * std::sqrt((1 - s) * (1 - s) + s * s)).margin(1e-12));
    }
    const auto mg = sqa::min_gap(trace);
    REQUIRE(mg.s == Catch::Approx(0.5));
    REQUIRE(mg.value == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("refined minimum matches the tilted one-qubit closed form", "[anneal]") {
    // Tilted qubit against a rescaled field: -(cos t X + sin t Z) -> c Z.
    // gap(s)/2 squared = (1-s)^2 cos^2 t + (s c - (1-s) sin t)^2, minimised at
    // s* = (1 + c sin t) / (1 + 2 c sin t + c^2), which is far from any grid
    // point for these values.
    const double t = 0.4, c = 1.3;
    RealVector theta(1), z(2);
    theta << t;
    z << c, -c;
    const AnnealPath path(theta, DiagonalHamiltonian{z});
    const auto trace = sqa::spectrum_trace(path, 2, 0.01);

    const double s_star = (1.0 + c * std::sin(t)) / (1.0 + 2.0 * c * std::sin(t) + c * c);
    const double f = (1.0 - s_star) * (1.0 - s_star) * std::cos(t) * std::cos(t) +
                     std::pow(s_star * c - (1.0 - s_star) * std::sin(t), 2);
    const double gap_star = 2.0 * std::sqrt(f);

    const auto coarse = sqa::min_gap(trace);
    const auto refined = sqa::min_gap_refined(path, trace);
    REQUIRE(refined.value <= coarse.value);
    REQUIRE(std::abs(refined.s - coarse.s) <= 0.01 + 1e-12);
    REQUIRE(refined.s == Catch::Approx(s_star).margin(1e-6));
    REQUIRE(refined.value == Catch::Approx(gap_star).margin(1e-10));
}

TEST_CASE("refinement uncovers crossings the grid steps over", "[anneal]") {
    // A fully tilted qubit (t = pi/2) has no transverse component, so the two
    // levels truly cross at s = 1/(1+c). On a 0.01 grid the smallest sampled
    // gap is of order 1e-2; the refined value must drop below the divergence
    // threshold.
    const double c = 1.3;
    RealVector theta(1), z(2);
    theta << std::acos(0.0);  // pi/2
    z << c, -c;
    const AnnealPath path(theta, DiagonalHamiltonian{z});
    const auto trace = sqa::spectrum_trace(path, 2, 0.01);

    const auto coarse = sqa::min_gap(trace);
    REQUIRE(coarse.value > 1e-3);  // the grid sees nothing unusual
    const auto refined = sqa::min_gap_refined(path, trace);
    REQUIRE(refined.s == Catch::Approx(1.0 / (1.0 + c)).margin(1e-9));
    REQUIRE(refined.value < sqa::kGapDivergenceThreshold);
}

TEST_CASE("identical endpoints give a constant spectrum", "[anneal]") {
    // Fully tilted sites make H0 diagonal; reuse it as the final Hamiltonian.
    const RealVector theta = RealVector::Constant(2, M_PI / 2.0);
    const auto h0 = sqa::rotated_initial_hamiltonian(theta);
    const AnnealPath path(theta, DiagonalHamiltonian{h0.matrix().diagonal().real()});
    const auto trace = sqa::spectrum_trace(path, 4, 0.1);
    for (Eigen::Index j = 1; j < trace.s_grid.size(); ++j) {
        REQUIRE((trace.levels.row(j) - trace.levels.row(0)).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(trace.gap(j) == Catch::Approx(trace.gap(0)).margin(1e-12));
    }
    REQUIRE(sqa::min_gap(trace).s == 0.0);  // ties resolve to the smallest s
}

TEST_CASE("trace quantities agree with an independent eigensolver", "[anneal]") {
    sqa::Rng rng(4040);
    RealVector theta(3);
    for (int i = 0; i < 3; ++i) theta(i) = rng.uniform(-1.0, 1.0);
    RealVector energies(8);
    for (int i = 0; i < 8; ++i) energies(i) = rng.normal();
    const AnnealPath path(theta, DiagonalHamiltonian{energies});
    const auto trace = sqa::spectrum_trace(path, 4, 0.1);
    for (Eigen::Index j = 0; j < trace.s_grid.size(); ++j) {
        Eigen::SelfAdjointEigenSolver<sqa::Matrix> solver(path.at(trace.s_grid(j)).matrix());
        const RealVector w = solver.eigenvalues();
        REQUIRE((trace.levels.row(j).transpose() - w.head(4)).cwiseAbs().maxCoeff() < 1e-10);
        REQUIRE(trace.gap(j) == Catch::Approx(w(1) - w(0)).margin(1e-10));
        REQUIRE(trace.norm_spectral(j) == Catch::Approx(w.cwiseAbs().maxCoeff()).margin(1e-10));
    }
}

TEST_CASE("degenerate final manifolds widen the tracked gap", "[anneal]") {
    RealVector energies(4);
    energies << 0.0, 0.0, 1.0, 1.0;  // final degeneracy 2
    const AnnealPath path(RealVector::Zero(2), DiagonalHamiltonian{energies});
    REQUIRE(path.final_degeneracy() == 2);
    const auto trace = sqa::spectrum_trace(path, 4, 0.5);
    // At s=0 the transverse-field ladder is (-2, 0, 0, 2): lambda_2 - lambda_0 = 2.
    REQUIRE(trace.gap(0) == Catch::Approx(2.0).margin(1e-12));
    // At s=1 the separation of the two manifolds is 1.
    REQUIRE(trace.gap(2) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("instantaneous adiabatic time matches the closed form", "[anneal]") {
    const auto path = direct_one_qubit();
    const auto trace = sqa::spectrum_trace(path, 2, 0.25);
    const auto profile = sqa::adiabatic_time_profile(path, trace);
    REQUIRE_FALSE(profile.divergent);
    // At s = 0.5: ||dH|| = ||Z + X|| = sqrt(2), ||H|| = sqrt(2)/2, gap = sqrt(2).
    REQUIRE(profile.t_ad(2) == Catch::Approx(0.5).margin(1e-12));
    // Endpoints: ||H|| = 1, gap = 2 -> T_ad = sqrt(2)/4.
    REQUIRE(profile.t_ad(0) == Catch::Approx(std::sqrt(2.0) / 4.0).margin(1e-12));
}

TEST_CASE("adiabatic time is invariant under endpoint rescaling", "[anneal]") {
    sqa::Rng rng(606);
    RealVector theta(2);
    theta << rng.uniform(-1, 1), rng.uniform(-1, 1);
    RealVector energies(4);
    for (int i = 0; i < 4; ++i) energies(i) = rng.normal();
    const AnnealPath path(theta, DiagonalHamiltonian{energies});
    const double c = 3.7;
    const AnnealPath scaled(sqa::HermitianOperator(c * sqa::rotated_initial_hamiltonian(theta).matrix()),
                            DiagonalHamiltonian{c * energies});
    for (NormKind norm : {NormKind::Spectral, NormKind::Frobenius}) {
        const auto p = sqa::adiabatic_time_profile(path, sqa::spectrum_trace(path, 2, 0.1), norm);
        const auto ps = sqa::adiabatic_time_profile(scaled, sqa::spectrum_trace(scaled, 2, 0.1), norm);
        REQUIRE((p.t_ad - ps.t_ad).cwiseAbs().maxCoeff() < 1e-9 * p.t_ad.maxCoeff());
    }
}

TEST_CASE("total time integrates the profile trapezoidally", "[anneal]") {
    ScheduleProfile profile;
    profile.s_grid = sqa::detail::uniform_grid(10);
    profile.t_ad = RealVector::Constant(11, 3.25);
    REQUIRE(sqa::total_adiabatic_time(profile) == Catch::Approx(3.25).margin(1e-14));
    profile.t_ad = profile.s_grid;  // linear integrand: exact under trapezoid
    REQUIRE(sqa::total_adiabatic_time(profile) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("constant-rate profiles invert to a linear schedule", "[anneal]") {
    ScheduleProfile profile;
    profile.s_grid = sqa::detail::uniform_grid(100);
    profile.t_ad = RealVector::Constant(101, 2.0);
    const auto sched = sqa::optimal_schedule(profile);
    REQUIRE(sched.t_total == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(sched.s_of_t(1.0) == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(sched.s_of_t(-5.0) == 0.0);  // clamped
    REQUIRE(sched.s_of_t(99.0) == 1.0);
    for (Eigen::Index j = 1; j < sched.t_of_s.size(); ++j)
        REQUIRE(sched.t_of_s(j) > sched.t_of_s(j - 1));
}

TEST_CASE("schedules slow down where the gap is smallest", "[anneal]") {
    const auto path = direct_one_qubit();
    const auto profile = sqa::adiabatic_time_profile(path, sqa::spectrum_trace(path, 2, 0.01));
    const auto sched = sqa::optimal_schedule(profile);
    // Round trip through the inversion on interior grid points.
    for (Eigen::Index j = 1; j + 1 < sched.s_grid.size(); ++j)
        REQUIRE(sched.s_of_t(sched.t_of_s(j)) == Catch::Approx(sched.s_grid(j)).margin(1e-6));
    // The time spent per step peaks at the gap minimum s = 0.5.
    Eigen::Index arg = 1;
    double best = 0.0;
    for (Eigen::Index j = 1; j < sched.t_of_s.size(); ++j)
        if (sched.t_of_s(j) - sched.t_of_s(j - 1) > best) {
            best = sched.t_of_s(j) - sched.t_of_s(j - 1);
            arg = j;
        }
    REQUIRE(std::abs(0.5 * (sched.s_grid(arg) + sched.s_grid(arg - 1)) - 0.5) <= 0.01);
}

TEST_CASE("gap closings mark the profile divergent", "[anneal]") {
    // Longitudinal initial state against an inverted final field: the levels
    // cross exactly at s = 0.5, which lies on the grid.
    RealVector theta(1);
    theta << M_PI / 2.0;  // H0 = -Z = diag(-1, +1)
    RealVector energies(2);
    energies << 1.0, -1.0;
    const AnnealPath path(theta, DiagonalHamiltonian{energies});
    const auto trace = sqa::spectrum_trace(path, 2, 0.01);
    REQUIRE(sqa::min_gap(trace).value < 1e-12);
    const auto profile = sqa::adiabatic_time_profile(path, trace);
    REQUIRE(profile.divergent);
    REQUIRE_THROWS_AS(sqa::total_adiabatic_time(profile), sqa::DivergenceError);
    REQUIRE_THROWS_AS(sqa::optimal_schedule(profile), sqa::DivergenceError);
    REQUIRE_THROWS_AS(sqa::gap_improvement_ratio(trace, trace), sqa::DivergenceError);
}

TEST_CASE("gap improvement compares minimum gaps", "[anneal]") {
    sqa::SpectrumTrace direct, steered;
    direct.s_grid = steered.s_grid = sqa::detail::uniform_grid(4);
    direct.gap = RealVector(5);
    direct.gap << 1.0, 0.4, 0.1, 0.4, 1.0;
    steered.gap = RealVector(5);
    steered.gap << 1.0, 0.5, 0.2, 0.5, 1.0;
    REQUIRE(sqa::gap_improvement_ratio(steered, direct) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(sqa::gap_improvement_ratio(direct, direct) == Catch::Approx(0.0).margin(1e-14));
}
