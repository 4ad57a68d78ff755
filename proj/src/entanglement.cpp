// entanglement.cpp — closed-form and spectral logarithmic negativity

#include "optoent/entanglement.hpp"

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optoent {

namespace {

constexpr double kDiscriminantTolerance = 1e-12;
constexpr double kPathAgreement = 1e-8;

} // namespace

double sigma_invariant(const CovarianceMatrix& v) {
    return det2(v.mirror_block()) + det2(v.cavity_block()) - 2.0 * det2(v.correlation_block());
}

double eta_minus(const CovarianceMatrix& v) {
    const double sigma = sigma_invariant(v);
    const double det_v = det4(v.matrix());
    if (!(det_v > 0.0)) {
        std::ostringstream os;
        os << "eta_minus: det V = " << det_v << " is not positive";
        throw UnphysicalState(os.str());
    }
    double disc = sigma * sigma - 4.0 * det_v;
    if (disc < 0.0) {
        if (disc < -kDiscriminantTolerance * sigma * sigma) {
            std::ostringstream os;
            os << "eta_minus: negative discriminant " << disc;
            throw UnphysicalState(os.str());
        }
        disc = 0.0;
    }
    const double inner = std::max(0.0, sigma - std::sqrt(disc));
    return std::sqrt(inner / 2.0);
}

double eta_minus_spectral(const CovarianceMatrix& v) {
    Mat4 flip = Mat4::Identity();
    flip(3, 3) = -1.0; // time reversal of the cavity mode
    const Mat4 transposed = flip * v.matrix() * flip;
    return symplectic_eigenvalues(transposed)[0];
}

double log_negativity_from_eta(double eta) noexcept {
    return std::max(0.0, -std::log(2.0 * eta));
}

double log_negativity(const CovarianceMatrix& v) {
    return log_negativity_from_eta(eta_minus(v));
}

bool simon_test(const CovarianceMatrix& v) {
    return 4.0 * det4(v.matrix()) < sigma_invariant(v) - 0.25 - kSimonBoundaryBand;
}

EntanglementReport analyze_entanglement(const CovarianceMatrix& v) {
    EntanglementReport r;
    r.det_a = det2(v.mirror_block());
    r.det_b = det2(v.cavity_block());
    r.det_c = det2(v.correlation_block());
    r.det_v = det4(v.matrix());
    r.sigma = r.det_a + r.det_b - 2.0 * r.det_c;
    r.eta_minus = eta_minus(v);
    r.log_neg = log_negativity_from_eta(r.eta_minus);
    r.simon_entangled = simon_test(v);
    r.eta_minus_spectral = eta_minus_spectral(v);

    const double gap = std::abs(r.eta_minus - r.eta_minus_spectral);
    if (gap > kPathAgreement * std::max(r.eta_minus, r.eta_minus_spectral)) {
        std::ostringstream os;
        os << "eta_minus routes disagree: closed form " << r.eta_minus << ", spectral "
           << r.eta_minus_spectral;
        r.diagnostic = os.str();
    }
    return r;
}

} // namespace optoent
