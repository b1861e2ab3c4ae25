#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

// Elementary lossless two-port optics: beam splitters parameterized by
// SU(2) Euler angles, fully reflecting mirrors with harmonically modulated
// phases, and their action on coherent-state amplitudes.

namespace nmzi {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/// SU(2) Euler-angle triple (phi, theta, psi) of one lossless two-port
/// element. theta must lie in [0, pi] so that both half-angle factors are
/// nonnegative; phi and psi are kept unreduced so composed constants stay
/// exactly comparable.
struct EulerAngles {
    double phi = 0.0;
    double theta = 0.0;
    double psi = 0.0;

    void validate() const;
};

/// 2x2 complex unitary acting on (top, left) mode amplitudes.
struct BSMatrix {
    cplx b11, b12, b21, b22;

    /// Largest entrywise deviation of B^dagger B from the identity.
    double unitarity_error() const;
    /// Intensity transmittance |b11|^2.
    double transmittance() const { return std::norm(b11); }
    double reflectance() const { return std::norm(b21); }
};

/// Beam-splitter matrix
///   [  cos(t/2) e^{ i(psi+phi)/2}   sin(t/2) e^{ i(psi-phi)/2} ]
///   [ -sin(t/2) e^{-i(psi-phi)/2}   cos(t/2) e^{-i(psi+phi)/2} ]
/// Throws std::invalid_argument on non-finite or out-of-range angles.
BSMatrix bs_matrix(const EulerAngles& angles);

/// Angles for a beam splitter with intensity transmittance tau:
/// theta = 2 acos(sqrt(tau)).
EulerAngles angles_from_transmittance(double tau, double phi = 0.0, double psi = 0.0);

/// One vibrating mirror: a full reflector (theta = pi) whose Euler phases
/// oscillate as psi0*sin(2*pi*f*t) and phi0*sin(2*pi*f*t).
struct MirrorSpec {
    char label = '?';      // one of A, B, C, E, F
    double freq_hz = 0.0;  // oscillation frequency, > 0
    double psi0 = 0.0;     // phase amplitude, radians
    double phi0 = 0.0;     // phase amplitude, radians

    double psi_t(double t) const { return psi0 * std::sin(2.0 * kPi * freq_hz * t); }
    double phi_t(double t) const { return phi0 * std::sin(2.0 * kPi * freq_hz * t); }
    /// Effective modulation angle (psi - phi)/2 at time t.
    double modulation(double t) const { return 0.5 * (psi_t(t) - phi_t(t)); }
    /// Depth of the effective modulation, (psi0 - phi0)/2.
    double modulation_depth() const { return 0.5 * (psi0 - phi0); }
    /// True when psi0 == phi0 and all modulation cancels.
    bool modulation_cancels() const { return psi0 == phi0; }

    void validate() const;
};

/// Mirror transfer matrix at time t: theta = pi, so
/// b12 = e^{i(psi(t)-phi(t))/2}, b21 = -e^{-i(psi(t)-phi(t))/2}, b11 = b22 = 0.
BSMatrix mirror_matrix(const MirrorSpec& mirror, double t);

/// Complex coherent amplitude attached to a network mode label.
struct CoherentAmp {
    cplx alpha{0.0, 0.0};
    std::string mode;
};

/// Coherent amplitudes transform linearly:
///   top'  = b11*top + b12*left,  left' = b21*top + b22*left.
std::pair<cplx, cplx> apply_bs(const BSMatrix& b, cplx in_top, cplx in_left);

std::pair<CoherentAmp, CoherentAmp> apply_bs_coherent(const BSMatrix& b,
                                                      const CoherentAmp& in_top,
                                                      const CoherentAmp& in_left,
                                                      std::string out_top_mode,
                                                      std::string out_left_mode);

}  // namespace nmzi
