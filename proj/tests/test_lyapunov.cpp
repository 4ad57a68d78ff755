// test_lyapunov.cpp — stationary covariance: dense solve, quadrature oracle, physicality

#include "optoent/errors.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/sweep.hpp"
#include "optoent/units.hpp"

#include "support/random_states.hpp"

#include <catch_amalgamated.hpp>

using namespace optoent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DerivedModel light_model() {
    return resolve_model(preset_params(units::kg_from_ng(5.0), 1.07e4)).model;
}

double rel_diff(const Mat4& a, const Mat4& b) {
    return (a - b).norm() / b.norm();
}

} // namespace

TEST_CASE("vacuum cavity relaxes to variance 1/2") {
    const Mat4 a = -2.0 * Mat4::Identity();
    const Mat4 d = 2.0 * Mat4::Identity();
    const CovarianceMatrix v = solve_lyapunov(a, d);
    CHECK((v.matrix() - 0.5 * Mat4::Identity()).norm() < 1e-14);
}

TEST_CASE("uncoupled thermal limit") {
    PhysicalParams p = preset_params(units::kg_from_ng(5.0), 1.07e4);
    p.input_power = 0.0;
    p.temperature = 0.4;
    const DerivedModel d = resolve_model(p).model;
    const CovarianceMatrix v = solve_lyapunov(d);
    const double n = d.nbar();
    Mat4 expected = Mat4::Zero();
    expected.diagonal() << n + 0.5, n + 0.5, 0.5, 0.5;
    CHECK((v.matrix() - expected).cwiseAbs().maxCoeff() < 1e-10 * (n + 0.5));
}

TEST_CASE("light-mirror covariance satisfies the equation and the quadrature oracle") {
    const DerivedModel d = light_model();
    const CovarianceMatrix v = solve_lyapunov(d);
    CHECK(lyapunov_residual<4>(d.drift, d.diffusion, v.matrix()) < 1e-12);
    CHECK(v.matrix().isApprox(v.matrix().transpose(), 0.0));
    const CovarianceMatrix oracle = integrate_cm_oracle(d.drift, d.diffusion);
    CHECK(rel_diff(v.matrix(), oracle.matrix()) < 1e-6);
    // Position and momentum of the mirror are uncorrelated in the steady state.
    CHECK(std::abs(v(0, 1)) < 1e-12 * v(0, 0));
}

TEST_CASE("dense solve agrees with quadrature on random stable systems") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sys = testsupport::random_stable_system(rng, std::pow(10.0, trial % 7 - 3));
        const CovarianceMatrix v = solve_lyapunov(sys.a, sys.d);
        const CovarianceMatrix oracle = integrate_cm_oracle(sys.a, sys.d);
        INFO("trial " << trial);
        CHECK(rel_diff(v.matrix(), oracle.matrix()) < 1e-6);
    }
}

TEST_CASE("unstable drift is rejected") {
    Mat4 a = -Mat4::Identity();
    a(2, 2) = 0.1;
    CHECK_THROWS_AS(solve_lyapunov(a, Mat4::Identity()), UnstableSystem);
    CHECK_THROWS_AS(integrate_cm_oracle(a, Mat4::Identity()), UnstableSystem);
    a(2, 2) = -1e-9; // inside the stability margin
    CHECK_THROWS_AS(solve_lyapunov(a, Mat4::Identity()), UnstableSystem);
}

TEST_CASE("quadrature oracle enforces its resolution requirements") {
    const Mat4 a = -Mat4::Identity();
    const Mat4 d = Mat4::Identity();
    CHECK_THROWS_AS(integrate_cm_oracle(a, d, 10.0, 1e-3), ConfigError);
    CHECK_THROWS_AS(integrate_cm_oracle(a, d, 30.0, 0.1), ConfigError);
    // A 20-decay-time horizon leaves a tail near e^-40 relative, well below 1e-8.
    const CovarianceMatrix v = integrate_cm_oracle(a, d, 20.0, 1e-3);
    CHECK((v.matrix() - 0.5 * Mat4::Identity()).norm() < 1e-9);
}

TEST_CASE("6x6 dense solve") {
    Mat6 a = -Mat6::Identity();
    a(0, 5) = 0.3;
    a(5, 0) = -0.3;
    const Mat6 d = Mat6::Identity();
    const Mat6 v = solve_lyapunov_dense<6>(a, d, default_margin<6>(a));
    CHECK(lyapunov_residual<6>(a, d, v) < 1e-13);
}

TEST_CASE("symplectic eigenvalues of simple states") {
    const auto vac = symplectic_eigenvalues(Mat4(0.5 * Mat4::Identity()));
    CHECK_THAT(vac[0], WithinAbs(0.5, 1e-14));
    CHECK_THAT(vac[1], WithinAbs(0.5, 1e-14));

    Mat4 thermal = Mat4::Zero();
    thermal.diagonal() << 3.5, 3.5, 0.5, 0.5;
    const auto nu = symplectic_eigenvalues(thermal);
    CHECK_THAT(nu[0], WithinAbs(0.5, 1e-13));
    CHECK_THAT(nu[1], WithinAbs(3.5, 1e-13));

    // Invariant under symplectic congruence.
    std::mt19937_64 rng(3);
    const Mat4 s = testsupport::random_symplectic(rng);
    const auto moved = symplectic_eigenvalues(Mat4(s * thermal * s.transpose()));
    CHECK_THAT(moved[0], WithinRel(0.5, 1e-9));
    CHECK_THAT(moved[1], WithinRel(3.5, 1e-9));
}

TEST_CASE("physicality check") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        CHECK(check_physicality(CovarianceMatrix(testsupport::random_physical_cm(rng))).physical);
    }
    // Squeezed below the uncertainty bound.
    Mat4 bad = 0.5 * Mat4::Identity();
    bad(0, 0) = 0.2;
    bad(1, 1) = 0.6;
    CHECK_FALSE(check_physicality(CovarianceMatrix(bad)).physical);
    CHECK(check_physicality(CovarianceMatrix(light_model().drift * 0.0 + solve_lyapunov(light_model()).matrix()))
              .physical);
}

TEST_CASE("covariance blocks") {
    Mat4 m;
    m << 1, 2, 3, 4,
         2, 5, 6, 7,
         3, 6, 8, 9,
         4, 7, 9, 10;
    const CovarianceMatrix v(m);
    CHECK(v.mirror_block()(1, 1) == 5.0);
    CHECK(v.cavity_block()(0, 1) == 9.0);
    CHECK(v.correlation_block()(1, 0) == 6.0);
}
