// random_states.hpp — random symplectic maps, physical covariances and stable drifts

#pragma once

#include "optoent/constants.hpp"
#include "optoent/linalg.hpp"
#include "optoent/lyapunov.hpp"

#include <cmath>
#include <random>

namespace testsupport {

using optoent::Mat2;
using optoent::Mat4;

inline Mat4 local(const Mat2& s1, const Mat2& s2) {
    Mat4 m = Mat4::Zero();
    m.topLeftCorner<2, 2>() = s1;
    m.bottomRightCorner<2, 2>() = s2;
    return m;
}

inline Mat2 rotation(double theta) {
    Mat2 r;
    r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return r;
}

inline Mat2 squeezer(double r) {
    Mat2 s = Mat2::Zero();
    s(0, 0) = std::exp(-r);
    s(1, 1) = std::exp(r);
    return s;
}

inline Mat4 beam_splitter(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Mat4 b = Mat4::Zero();
    b.topLeftCorner<2, 2>() = c * Mat2::Identity();
    b.topRightCorner<2, 2>() = s * Mat2::Identity();
    b.bottomLeftCorner<2, 2>() = -s * Mat2::Identity();
    b.bottomRightCorner<2, 2>() = c * Mat2::Identity();
    return b;
}

inline Mat4 two_mode_squeezer(double r) {
    Mat2 z = Mat2::Zero();
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    Mat4 t = Mat4::Zero();
    t.topLeftCorner<2, 2>() = std::cosh(r) * Mat2::Identity();
    t.bottomRightCorner<2, 2>() = std::cosh(r) * Mat2::Identity();
    t.topRightCorner<2, 2>() = std::sinh(r) * z;
    t.bottomLeftCorner<2, 2>() = std::sinh(r) * z;
    return t;
}

// Two-mode squeezed vacuum: E_N = 2r, eta^- = exp(-2r)/2.
inline Mat4 two_mode_squeezed_vacuum(double r) {
    const Mat4 t = two_mode_squeezer(r);
    return 0.5 * t * t.transpose();
}

inline Mat4 random_symplectic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * optoent::constants::pi);
    std::uniform_real_distribution<double> squeeze(0.0, 1.0);
    return local(rotation(angle(rng)), rotation(angle(rng))) *
           local(squeezer(squeeze(rng)), squeezer(squeeze(rng))) * beam_splitter(angle(rng)) *
           two_mode_squeezer(squeeze(rng)) * local(rotation(angle(rng)), rotation(angle(rng)));
}

// S diag(n1, n1, n2, n2) S^T with symplectic eigenvalues n_i >= 1/2.
inline Mat4 random_physical_cm(std::mt19937_64& rng) {
    std::exponential_distribution<double> occupation(1.0);
    const double n1 = 0.5 + occupation(rng);
    const double n2 = 0.5 + occupation(rng);
    Mat4 diag = Mat4::Zero();
    diag.diagonal() << n1, n1, n2, n2;
    const Mat4 s = random_symplectic(rng);
    return optoent::symmetrized(s * diag * s.transpose());
}

struct RandomSystem {
    Mat4 a;
    Mat4 d;
};

// Generic drift with spectral abscissa in [-scale, -0.05 scale] and a random
// positive semidefinite diffusion.
inline RandomSystem random_stable_system(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> target(0.05, 1.0);
    Mat4 a;
    Mat4 b;
    for (int i = 0; i < 16; ++i) {
        a.data()[i] = normal(rng);
        b.data()[i] = normal(rng);
    }
    const double shift = optoent::spectral_abscissa(a) + target(rng);
    a -= shift * Mat4::Identity();
    return {a * scale, b * b.transpose() * scale};
}

} // namespace testsupport
