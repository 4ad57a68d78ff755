// lyapunov.hpp — stationary covariance matrix of the linearized dynamics
//
// For du = A u dt + noise with white-noise strength D, the stationary
// symmetrized covariance V solves A V + V A^T = -D, equivalently
// V = int_0^inf e^{As} D e^{A^T s} ds.

#pragma once

#include "optoent/linalg.hpp"
#include "optoent/model.hpp"

#include <array>

namespace optoent {

// 4x4 symmetric covariance in (dq, dp, dX, dY) ordering, symmetrized on
// construction. Blocks follow V = [[A, C], [C^T, B]].
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;
    explicit CovarianceMatrix(const Mat4& v) : v_(symmetrized(v)) {}

    const Mat4& matrix() const noexcept { return v_; }
    double operator()(int i, int j) const { return v_(i, j); }

    Mat2 mirror_block() const { return v_.topLeftCorner<2, 2>(); }
    Mat2 cavity_block() const { return v_.bottomRightCorner<2, 2>(); }
    Mat2 correlation_block() const { return v_.topRightCorner<2, 2>(); }

private:
    Mat4 v_ = Mat4::Zero();
};

// Default stability margin for a bare drift matrix: 1e-6 * max |A_ij|.
template <int N>
double default_margin(const Mat<N>& a) {
    return 1e-6 * a.cwiseAbs().maxCoeff();
}

// ||A V + V A^T + D||_F / ||D||_F (absolute when D = 0).
template <int N>
double lyapunov_residual(const Mat<N>& a, const Mat<N>& d, const Mat<N>& v) {
    const double r = (a * v + v * a.transpose() + d).norm();
    const double scale = d.norm();
    return scale > 0.0 ? r / scale : r;
}

// Dense Kronecker-sum solve of A V + V A^T = -D for N = 4 or 6.
// Throws UnstableSystem when max Re lambda(A) >= -margin, NumericalFailure
// when the relative residual exceeds 1e-10.
template <int N>
Mat<N> solve_lyapunov_dense(const Mat<N>& a, const Mat<N>& d, double margin);

CovarianceMatrix solve_lyapunov(const Mat4& a, const Mat4& d, double margin);
CovarianceMatrix solve_lyapunov(const Mat4& a, const Mat4& d);
// Uses the model's shared stability margin.
CovarianceMatrix solve_lyapunov(const DerivedModel& model);

// Slow independent route: composite Simpson quadrature (trapezoid plus one
// Richardson step) of e^{As} D e^{A^T s} over [0, horizon], each exponential
// advanced by repeated products of e^{Ah}. Throws UnstableSystem, ConfigError for a horizon
// shorter than 20 decay times or a step above 0.01 / rho(A), and
// NonConvergence when the neglected tail exceeds 1e-8 of the result.
CovarianceMatrix integrate_cm_oracle(const Mat4& a, const Mat4& d, double horizon, double step);
// Horizon of 30 decay times, step 0.01 / max |A_ij|.
CovarianceMatrix integrate_cm_oracle(const Mat4& a, const Mat4& d);

// Two-mode symplectic form diag(J, J), J = [[0, 1], [-1, 0]].
Mat4 symplectic_form();

// Moduli of the eigenvalues of i Omega V, ascending (each appears twice in
// the spectrum; returned once).
std::array<double, 2> symplectic_eigenvalues(const Mat4& v);

struct PhysicalityCheck {
    bool physical = false;
    double min_symplectic_eigenvalue = 0.0;
};

// Physical iff V > 0 and every symplectic eigenvalue >= 1/2 - 1e-9.
PhysicalityCheck check_physicality(const CovarianceMatrix& v);

} // namespace optoent
