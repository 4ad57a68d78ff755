// entanglement.hpp — two-mode Gaussian entanglement: eta^-, E_N, Simon test
//
// Two independent routes to the smallest partially-transposed symplectic
// eigenvalue are kept: the closed form in Sigma = det A + det B - 2 det C and
// det V, and the spectrum of i Omega V~ with V~ the partial transpose.

#pragma once

#include "optoent/lyapunov.hpp"

#include <optional>
#include <string>

namespace optoent {

struct EntanglementReport {
    double eta_minus = 0.0;
    double log_neg = 0.0;
    bool simon_entangled = false;
    double sigma = 0.0;
    double det_v = 0.0;
    double det_a = 0.0;
    double det_b = 0.0;
    double det_c = 0.0;
    double eta_minus_spectral = 0.0;
    // Set when the two routes to eta^- differ by more than 1e-8 (relative).
    std::optional<std::string> diagnostic;
};

// Sigma(V) = det A + det B - 2 det C.
double sigma_invariant(const CovarianceMatrix& v);

// Closed form. Throws UnphysicalState when det V <= 0 or the discriminant
// Sigma^2 - 4 det V is below -1e-12 Sigma^2 (clamped to 0 above that).
double eta_minus(const CovarianceMatrix& v);

// Smallest modulus of the eigenvalues of i Omega V~.
double eta_minus_spectral(const CovarianceMatrix& v);

// max(0, -ln 2 eta).
double log_negativity_from_eta(double eta) noexcept;
double log_negativity(const CovarianceMatrix& v);

// 4 det V < Sigma - 1/4 - 1e-9. States inside the band count as separable.
bool simon_test(const CovarianceMatrix& v);

EntanglementReport analyze_entanglement(const CovarianceMatrix& v);

} // namespace optoent
