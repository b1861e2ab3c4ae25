#pragma once

#include <cstdint>
#include <vector>

#include "nmzi/network.hpp"

// Power spectra of the detector-mode amplitude: a Hann-windowed periodogram
// of the sampled baseband signal, the first-order sideband line list, the
// symbolic delta-line form of the quantum spectral density, and averages
// over classical (proper-P) mixtures of coherent states.

namespace nmzi {

struct TimeSeries {
    std::vector<cplx> samples;
    double rate = 0.0;      // samples per second
    double duration = 0.0;  // seconds
};

struct Spectrum {
    std::vector<double> freqs;  // Hz, ascending, two-sided around 0
    std::vector<double> power;  // spectral density, >= 0
    double bin_hz = 0.0;
    double floor_median = 0.0;  // median bin density

    double total_power() const;  // sum power * bin_hz
};

struct SpectralLine {
    double freq_hz = 0.0;  // for the symbolic quantum lines: +/- omega0 in rad/s
    cplx weight;           // complex weight or real power in .real()
};
using LineList = std::vector<SpectralLine>;

struct PeakEntry {
    char mirror = '?';
    double freq_hz = 0.0;
    double power = 0.0;          // peak bin density
    double prominence_db = 0.0;  // above detection floor
    bool present = false;
};
using PeakTable = std::vector<PeakEntry>;

/// Detection threshold above the floor, and the instrument dynamic range
/// that bounds the floor from below (numerically exact synthetic data would
/// otherwise expose hundreds of dB).
constexpr double kPeakThresholdDb = 20.0;
constexpr double kDynamicRange = 1e-12;  // -120 dB relative to total power

/// Detector-mode samples at t_k = k/rate. Throws std::invalid_argument when
/// the rate gives less than a 20x margin over the fastest mirror or the
/// duration resolves the closest mirror pair with less than a 10x margin.
TimeSeries sample_detector(const Network& net, cplx alpha, double duration, double rate);

/// Hann-windowed periodogram, rescaled so that sum(power)*bin_hz equals the
/// mean squared sample exactly. Needs at least 1024 samples.
Spectrum psd(const TimeSeries& ts);

/// First-order modulation sidebands at +/- f_i with powers
/// carrier^2 * J1(|c_i| * (psi0 - phi0))^2, where c_i is the coefficient of
/// (Psi_i - Phi_i) in the detector phase. Valid for psi0 - phi0 <= 0.1 rad.
LineList analytic_lines(int setup, Setup2Mode mode, const NetworkConfig& cfg, cplx alpha);

/// The four delta lines of the quantum spectral density
///   2 pi x_zpf^2 [ a^2 d(w-w0) + (a*)^2 d(w+w0) + |a|^2 d(w+w0)
///                  + (1+|a|^2) d(w-w0) ],
/// returned in that order with freq_hz = +/- omega0.
LineList quantum_psd_lines(cplx alpha, double omega0, double x_zpf);

/// Nearest-bin peak power and prominence over the detection floor for each
/// mirror frequency. The floor is the median bin density away from the known
/// lines, clamped below by the dynamic-range limit.
PeakTable peak_report(const Spectrum& spec, const std::array<MirrorSpec, 5>& mirrors,
                      double threshold_db = kPeakThresholdDb);

/// Proper (nonnegative) P-distribution over coherent amplitudes.
struct EnsembleSpec {
    enum class Kind { Point, Thermal, Mixture };
    Kind kind = Kind::Point;
    cplx alpha{1.0, 0.0};                          // Point
    double nbar = 0.0;                             // Thermal mean photon number
    std::vector<std::pair<cplx, double>> mixture;  // (amplitude, weight)

    void validate() const;  // weights nonnegative and normalized
};

struct MixtureResult {
    Spectrum spectrum;
    double mean_alpha_sq = 0.0;
    int draws = 0;
};

/// Ensemble-averaged spectrum. Propagation is linear in the input amplitude,
/// so each draw scales the unit-input spectrum by |alpha|^2; peak membership
/// is invariant across draws. Deterministic for a fixed seed.
MixtureResult classical_mixture_spectrum(const EnsembleSpec& ensemble, const Network& net,
                                         double duration, double rate, int n_draws,
                                         std::uint64_t seed);

/// Thermal P-distribution draw: complex Gaussian, variance nbar/2 per
/// quadrature (exposed for tests and for the sampling-identity check).
cplx thermal_draw(double nbar, std::uint64_t seed, std::uint64_t index);

}  // namespace nmzi
