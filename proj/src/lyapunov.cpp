// lyapunov.cpp — vectorized Lyapunov solve, quadrature oracle, physicality

#include "optoent/lyapunov.hpp"

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optoent {

namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr double kPhysicalityTolerance = 1e-9;

template <int N>
void require_stable(const Mat<N>& a, double margin, const char* who) {
    double abscissa = 0.0;
    try {
        abscissa = spectral_abscissa(a);
    } catch (const std::runtime_error& e) {
        throw NumericalFailure(std::string(who) + ": " + e.what());
    }
    if (!(abscissa < -margin)) {
        std::ostringstream os;
        os << who << ": drift matrix not stable (max Re lambda = " << abscissa
           << ", margin " << margin << ")";
        throw UnstableSystem(os.str());
    }
}

} // namespace

template <int N>
Mat<N> solve_lyapunov_dense(const Mat<N>& a, const Mat<N>& d, double margin) {
    require_stable(a, margin, "solve_lyapunov");

    // The equation is homogeneous under (A, D) -> (A/s, D/s); solve at unit scale.
    const double scale = a.cwiseAbs().maxCoeff();
    const Mat<N> as = a / scale;
    const Mat<N> ds = d / scale;

    const auto k = kronecker_sum<N>(as);
    const Eigen::Matrix<double, N * N, 1> rhs =
        -Eigen::Map<const Eigen::Matrix<double, N * N, 1>>(ds.data());
    const Eigen::Matrix<double, N * N, 1> x = k.fullPivLu().solve(rhs);
    const Mat<N> v = symmetrized(Eigen::Map<const Mat<N>>(x.data()));

    const double residual = lyapunov_residual<N>(a, d, v);
    if (!(residual < kResidualTolerance)) {
        std::ostringstream os;
        os << "solve_lyapunov: relative residual " << residual << " exceeds " << kResidualTolerance;
        throw NumericalFailure(os.str());
    }
    return v;
}

template Mat<4> solve_lyapunov_dense<4>(const Mat<4>&, const Mat<4>&, double);
template Mat<6> solve_lyapunov_dense<6>(const Mat<6>&, const Mat<6>&, double);

CovarianceMatrix solve_lyapunov(const Mat4& a, const Mat4& d, double margin) {
    return CovarianceMatrix(solve_lyapunov_dense<4>(a, d, margin));
}

CovarianceMatrix solve_lyapunov(const Mat4& a, const Mat4& d) {
    return solve_lyapunov(a, d, default_margin<4>(a));
}

CovarianceMatrix solve_lyapunov(const DerivedModel& model) {
    return solve_lyapunov(model.drift, model.diffusion,
                          stability_margin(model.mech_freq, model.kappa()));
}

CovarianceMatrix integrate_cm_oracle(const Mat4& a, const Mat4& d, double horizon, double step) {
    require_stable(a, default_margin<4>(a), "integrate_cm_oracle");
    const double decay = -spectral_abscissa(a);
    const double fastest = spectral_radius(a);
    if (!(horizon >= 20.0 / decay)) {
        throw ConfigError("integrate_cm_oracle: horizon shorter than 20 decay times");
    }
    if (!(step > 0.0) || step * fastest > 0.01 * (1.0 + 1e-12)) {
        throw ConfigError("integrate_cm_oracle: step does not resolve the fastest time scale");
    }

    // Even interval count so the doubled grid is a subset of the fine one.
    std::size_t intervals = static_cast<std::size_t>(std::ceil(horizon / step));
    intervals += intervals % 2;
    const double h = horizon / static_cast<double>(intervals);

    Mat4 fine = Mat4::Zero();   // trapezoid at h
    Mat4 coarse = Mat4::Zero(); // trapezoid at 2h
    Mat4 last = Mat4::Zero();
    // e^{A k h} = (e^{A h})^k, advanced one node at a time.
    const Mat4 step_map = expm<4>(a * h);
    Mat4 m = Mat4::Identity();
    for (std::size_t k = 0; k <= intervals; ++k) {
        if (k > 0) {
            m = step_map * m;
        }
        const Mat4 f = m * d * m.transpose();
        const double end_weight = (k == 0 || k == intervals) ? 0.5 : 1.0;
        fine += end_weight * f;
        if (k % 2 == 0) {
            coarse += end_weight * f;
        }
        last = f;
    }
    fine *= h;
    coarse *= 2.0 * h;
    const Mat4 v = (4.0 * fine - coarse) / 3.0;

    // The integrand decays at least as fast as exp(-2 decay s) past the horizon.
    const double tail = last.norm() / (2.0 * decay);
    if (tail > 1e-8 * v.norm()) {
        std::ostringstream os;
        os << "integrate_cm_oracle: tail estimate " << tail << " exceeds 1e-8 of ||V|| = " << v.norm();
        throw NonConvergence(os.str());
    }
    return CovarianceMatrix(v);
}

CovarianceMatrix integrate_cm_oracle(const Mat4& a, const Mat4& d) {
    require_stable(a, default_margin<4>(a), "integrate_cm_oracle");
    const double decay = -spectral_abscissa(a);
    const double rate = std::max(a.cwiseAbs().maxCoeff(), spectral_radius(a));
    return integrate_cm_oracle(a, d, 30.0 / decay, 0.01 / rate);
}

Mat4 symplectic_form() {
    Mat4 omega = Mat4::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

std::array<double, 2> symplectic_eigenvalues(const Mat4& v) {
    Eigen::EigenSolver<Mat4> solver(symplectic_form() * v, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("symplectic_eigenvalues: eigenvalue iteration did not converge");
    }
    // Spectrum of Omega V is {+-i nu_1, +-i nu_2}; sorting the moduli pairs them.
    std::array<double, 4> moduli{};
    for (int i = 0; i < 4; ++i) {
        moduli[i] = std::abs(solver.eigenvalues()[i]);
    }
    std::sort(moduli.begin(), moduli.end());
    return {0.5 * (moduli[0] + moduli[1]), 0.5 * (moduli[2] + moduli[3])};
}

PhysicalityCheck check_physicality(const CovarianceMatrix& v) {
    PhysicalityCheck check;
    check.min_symplectic_eigenvalue = symplectic_eigenvalues(v.matrix())[0];
    const bool positive = v.matrix().llt().info() == Eigen::Success;
    check.physical = positive && check.min_symplectic_eigenvalue >= 0.5 - kPhysicalityTolerance;
    return check;
}

} // namespace optoent
