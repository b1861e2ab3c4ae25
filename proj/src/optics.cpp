#include "nmzi/optics.hpp"

#include <cmath>

namespace nmzi {

namespace {
bool finite(double x) { return std::isfinite(x); }
}  // namespace

void EulerAngles::validate() const {
    if (!finite(phi) || !finite(theta) || !finite(psi))
        throw std::invalid_argument("EulerAngles: angles must be finite");
    if (theta < 0.0 || theta > kPi)
        throw std::invalid_argument("EulerAngles: theta must lie in [0, pi]");
}

double BSMatrix::unitarity_error() const {
    // B^dagger B - I, entrywise max modulus.
    cplx g11 = std::conj(b11) * b11 + std::conj(b21) * b21 - 1.0;
    cplx g12 = std::conj(b11) * b12 + std::conj(b21) * b22;
    cplx g21 = std::conj(b12) * b11 + std::conj(b22) * b21;
    cplx g22 = std::conj(b12) * b12 + std::conj(b22) * b22 - 1.0;
    return std::max(std::max(std::abs(g11), std::abs(g12)),
                    std::max(std::abs(g21), std::abs(g22)));
}

BSMatrix bs_matrix(const EulerAngles& angles) {
    angles.validate();
    const double c = std::cos(0.5 * angles.theta);
    const double s = std::sin(0.5 * angles.theta);
    const cplx sum = std::polar(1.0, 0.5 * (angles.psi + angles.phi));
    const cplx dif = std::polar(1.0, 0.5 * (angles.psi - angles.phi));
    return BSMatrix{c * sum, s * dif, -s * std::conj(dif), c * std::conj(sum)};
}

EulerAngles angles_from_transmittance(double tau, double phi, double psi) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("transmittance must lie in [0, 1]");
    return EulerAngles{phi, 2.0 * std::acos(std::sqrt(tau)), psi};
}

void MirrorSpec::validate() const {
    if (!(freq_hz > 0.0) || !finite(freq_hz))
        throw std::invalid_argument("MirrorSpec: freq_hz must be positive");
    if (!finite(psi0) || !finite(phi0))
        throw std::invalid_argument("MirrorSpec: phase amplitudes must be finite");
}

BSMatrix mirror_matrix(const MirrorSpec& mirror, double t) {
    mirror.validate();
    if (!std::isfinite(t)) throw std::invalid_argument("mirror_matrix: t must be finite");
    const cplx r = std::polar(1.0, mirror.modulation(t));
    return BSMatrix{cplx{0.0, 0.0}, r, -std::conj(r), cplx{0.0, 0.0}};
}

std::pair<cplx, cplx> apply_bs(const BSMatrix& b, cplx in_top, cplx in_left) {
    return {b.b11 * in_top + b.b12 * in_left, b.b21 * in_top + b.b22 * in_left};
}

std::pair<CoherentAmp, CoherentAmp> apply_bs_coherent(const BSMatrix& b,
                                                      const CoherentAmp& in_top,
                                                      const CoherentAmp& in_left,
                                                      std::string out_top_mode,
                                                      std::string out_left_mode) {
    auto [t, l] = apply_bs(b, in_top.alpha, in_left.alpha);
    return {CoherentAmp{t, std::move(out_top_mode)}, CoherentAmp{l, std::move(out_left_mode)}};
}

}  // namespace nmzi
