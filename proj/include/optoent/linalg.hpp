// linalg.hpp — small fixed-size dense matrix helpers (Eigen based)

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace optoent {

template <int N>
using Mat = Eigen::Matrix<double, N, N>;

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;
using Mat6 = Mat<6>;

template <typename Derived>
auto symmetrized(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    return Plain(0.5 * (m + m.transpose()));
}

inline double det2(const Mat2& m) noexcept {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// Cofactor expansion via 2x2 minors of the first two rows (Laplace).
inline double det4(const Mat4& m) noexcept {
    const double s0 = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
    const double s1 = m(0, 0) * m(1, 2) - m(1, 0) * m(0, 2);
    const double s2 = m(0, 0) * m(1, 3) - m(1, 0) * m(0, 3);
    const double s3 = m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2);
    const double s4 = m(0, 1) * m(1, 3) - m(1, 1) * m(0, 3);
    const double s5 = m(0, 2) * m(1, 3) - m(1, 2) * m(0, 3);

    const double c5 = m(2, 2) * m(3, 3) - m(3, 2) * m(2, 3);
    const double c4 = m(2, 1) * m(3, 3) - m(3, 1) * m(2, 3);
    const double c3 = m(2, 1) * m(3, 2) - m(3, 1) * m(2, 2);
    const double c2 = m(2, 0) * m(3, 3) - m(3, 0) * m(2, 3);
    const double c1 = m(2, 0) * m(3, 2) - m(3, 0) * m(2, 2);
    const double c0 = m(2, 0) * m(3, 1) - m(3, 0) * m(2, 1);

    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

// Largest real part over the spectrum.
template <typename Derived>
double spectral_abscissa(const Eigen::MatrixBase<Derived>& a) {
    Eigen::EigenSolver<typename Derived::PlainObject> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_abscissa: eigenvalue iteration did not converge");
    }
    return solver.eigenvalues().real().maxCoeff();
}

template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& a) {
    Eigen::EigenSolver<typename Derived::PlainObject> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_radius: eigenvalue iteration did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Matrix exponential by scaling and squaring with a diagonal [6/6] Pade
// approximant. The argument is scaled so that ||A/2^s||_1 <= 1/2, where the
// truncation error of the approximant is below double precision.
template <int N>
Mat<N> expm(const Mat<N>& a) {
    constexpr double kPade[] = {1.0,
                                1.0 / 2.0,
                                5.0 / 44.0,
                                1.0 / 66.0,
                                1.0 / 792.0,
                                1.0 / 15840.0,
                                1.0 / 665280.0};

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm)) {
        throw std::domain_error("expm: non-finite matrix");
    }
    int squarings = 0;
    if (norm > 0.5) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
    }
    const Mat<N> x = a * std::ldexp(1.0, -squarings);

    const Mat<N> id = Mat<N>::Identity();
    const Mat<N> x2 = x * x;
    const Mat<N> x4 = x2 * x2;
    const Mat<N> x6 = x4 * x2;
    const Mat<N> even = kPade[0] * id + kPade[2] * x2 + kPade[4] * x4 + kPade[6] * x6;
    const Mat<N> odd = x * (kPade[1] * id + kPade[3] * x2 + kPade[5] * x4);

    Mat<N> result = (even - odd).partialPivLu().solve(even + odd);
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

// Kronecker sum I (x) A + A (x) I acting on column-major vec(X): vec(AX + XA^T).
template <int N>
Eigen::Matrix<double, N * N, N * N> kronecker_sum(const Mat<N>& a) {
    Eigen::Matrix<double, N * N, N * N> k = Eigen::Matrix<double, N * N, N * N>::Zero();
    for (int col = 0; col < N; ++col) {
        for (int row = 0; row < N; ++row) {
            for (int m = 0; m < N; ++m) {
                // (AX)_{row,col} = sum_m A_{row,m} X_{m,col}
                k(col * N + row, col * N + m) += a(row, m);
                // (XA^T)_{row,col} = sum_m X_{row,m} A_{col,m}
                k(col * N + row, m * N + row) += a(col, m);
            }
        }
    }
    return k;
}

} // namespace optoent
