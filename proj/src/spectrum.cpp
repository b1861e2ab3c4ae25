#include "nmzi/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nmzi {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return (splitmix64(state) >> 11) * 0x1.0p-53 + 0x1.0p-54;  // (0,1)
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

}  // namespace

double Spectrum::total_power() const {
    return std::accumulate(power.begin(), power.end(), 0.0) * bin_hz;
}

TimeSeries sample_detector(const Network& net, cplx alpha, double duration, double rate) {
    const NetworkConfig& cfg = net.config();
    if (rate < 20.0 * cfg.max_mirror_freq())
        throw std::invalid_argument(
            "sample rate below 20x the fastest mirror; increase --rate");
    if (duration < 10.0 / cfg.min_freq_gap())
        throw std::invalid_argument(
            "duration too short to resolve the closest mirror pair; increase --duration");
    const size_t n = (size_t)std::llround(duration * rate);
    TimeSeries ts;
    ts.rate = rate;
    ts.duration = duration;
    ts.samples.resize(n);
    for (size_t k = 0; k < n; ++k) ts.samples[k] = net.detector(alpha, (double)k / rate);
    return ts;
}

Spectrum psd(const TimeSeries& ts) {
    const size_t n = ts.samples.size();
    if (n < 1024) throw std::invalid_argument("psd needs at least 1024 samples");

    std::vector<cplx> buf(n);
    for (size_t k = 0; k < n; ++k) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * (double)k / (double)n));
        buf[k] = w * ts.samples[k];
    }
    std::vector<cplx> out(n);
    fftw_plan plan = fftw_plan_dft_1d((int)n, reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    Spectrum spec;
    spec.bin_hz = ts.rate / (double)n;
    spec.freqs.resize(n);
    spec.power.resize(n);
    double raw_total = 0.0;
    for (size_t k = 0; k < n; ++k) raw_total += std::norm(out[k]);
    double mean_sq = 0.0;
    for (const cplx& x : ts.samples) mean_sq += std::norm(x);
    mean_sq /= (double)n;
    // Rescale so the integrated density reproduces the mean squared sample.
    const double scale = raw_total > 0.0 ? mean_sq / (raw_total * spec.bin_hz) : 0.0;
    const size_t half = n / 2;
    for (size_t k = 0; k < n; ++k) {
        const size_t src = (k + half) % n;  // fftshift
        spec.freqs[k] = ((double)k - (double)half) * spec.bin_hz;
        spec.power[k] = scale * std::norm(out[src]);
    }
    spec.floor_median = median(spec.power);
    return spec;
}

LineList analytic_lines(int setup, Setup2Mode mode, const NetworkConfig& cfg, cplx alpha) {
    (void)mode;  // first-order weights agree between the two setup-2 modes
    const double depth = cfg.mirrors[0].psi0 - cfg.mirrors[0].phi0;
    if (std::abs(depth) > 0.1)
        throw std::domain_error("modulation too large for first-order sideband weights");

    // Coefficient of (Psi_i - Phi_i) in the detector phase, per mirror.
    std::array<double, 5> coeff{};  // order A, B, C, E, F
    double carrier_amp;
    if (setup == 1) {
        coeff = {0.125, -0.125, -0.25, 0.25, 0.25};
        carrier_amp = std::abs(alpha);
    } else {
        coeff = {0.5, 0.5, -0.5, 0.0, 0.0};
        carrier_amp = std::abs(alpha) / 3.0;
    }
    const double carrier_power = carrier_amp * carrier_amp;

    LineList lines;
    double j0_product = 1.0;
    for (int i = 0; i < 5; ++i)
        j0_product *= std::cyl_bessel_j(0, std::abs(coeff[i] * depth));
    lines.push_back({0.0, cplx{carrier_power * j0_product * j0_product, 0.0}});
    for (int i = 0; i < 5; ++i) {
        if (coeff[i] == 0.0) continue;
        const double j1 = std::cyl_bessel_j(1, std::abs(coeff[i] * depth));
        const double p = carrier_power * j1 * j1;
        lines.push_back({cfg.mirrors[i].freq_hz, cplx{p, 0.0}});
        lines.push_back({-cfg.mirrors[i].freq_hz, cplx{p, 0.0}});
    }
    return lines;
}

LineList quantum_psd_lines(cplx alpha, double omega0, double x_zpf) {
    const double s = 2.0 * kPi * x_zpf * x_zpf;
    return {
        {+omega0, s * alpha * alpha},
        {-omega0, s * std::conj(alpha) * std::conj(alpha)},
        {-omega0, cplx{s * std::norm(alpha), 0.0}},
        {+omega0, cplx{s * (1.0 + std::norm(alpha)), 0.0}},
    };
}

PeakTable peak_report(const Spectrum& spec, const std::array<MirrorSpec, 5>& mirrors,
                      double threshold_db) {
    const size_t n = spec.power.size();
    if (n == 0) throw std::invalid_argument("empty spectrum");
    const size_t half = n / 2;
    double min_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mirrors.size(); ++i)
        for (size_t j = i + 1; j < mirrors.size(); ++j)
            min_gap = std::min(min_gap, std::abs(mirrors[i].freq_hz - mirrors[j].freq_hz));
    if (spec.bin_hz > 0.5 * min_gap)
        throw std::invalid_argument("spectral resolution coarser than half the minimum "
                                    "mirror frequency gap");

    auto bin_of = [&](double f) -> long {
        return std::lround(f / spec.bin_hz) + (long)half;
    };

    // Median floor away from the known lines, clamped by dynamic range.
    std::vector<bool> excluded(n, false);
    for (const auto& m : mirrors) {
        for (double sign : {+1.0, -1.0}) {
            const long c = bin_of(sign * m.freq_hz);
            for (long k = c - 3; k <= c + 3; ++k)
                if (k >= 0 && k < (long)n) excluded[k] = true;
        }
    }
    std::vector<double> rest;
    rest.reserve(n);
    for (size_t k = 0; k < n; ++k)
        if (!excluded[k]) rest.push_back(spec.power[k]);
    const double limit = kDynamicRange * spec.total_power() / spec.bin_hz;
    const double floor = std::max(median(std::move(rest)), limit);

    PeakTable table;
    for (const auto& m : mirrors) {
        const long c = bin_of(m.freq_hz);
        double peak = 0.0;
        for (long k = c - 2; k <= c + 2; ++k)
            if (k >= 0 && k < (long)n) peak = std::max(peak, spec.power[k]);
        PeakEntry e;
        e.mirror = m.label;
        e.freq_hz = m.freq_hz;
        e.power = peak;
        e.prominence_db = (floor > 0.0 && peak > 0.0)
                              ? 10.0 * std::log10(peak / floor)
                              : 0.0;
        e.present = e.prominence_db >= threshold_db;
        table.push_back(e);
    }
    return table;
}

void EnsembleSpec::validate() const {
    switch (kind) {
        case Kind::Point:
            return;
        case Kind::Thermal:
            if (!(nbar >= 0.0) || !std::isfinite(nbar))
                throw std::invalid_argument("thermal mean photon number must be >= 0");
            return;
        case Kind::Mixture: {
            if (mixture.empty()) throw std::invalid_argument("empty mixture");
            double total = 0.0;
            for (const auto& [a, w] : mixture) {
                if (w < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
                total += w;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw std::invalid_argument("mixture weights must sum to 1");
            return;
        }
    }
}

cplx thermal_draw(double nbar, std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    const double u1 = uniform01(state);
    const double u2 = uniform01(state);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double sigma = std::sqrt(0.5 * nbar);
    return cplx{sigma * r * std::cos(2.0 * kPi * u2), sigma * r * std::sin(2.0 * kPi * u2)};
}

MixtureResult classical_mixture_spectrum(const EnsembleSpec& ensemble, const Network& net,
                                         double duration, double rate, int n_draws,
                                         std::uint64_t seed) {
    ensemble.validate();
    if (n_draws < 1) throw std::invalid_argument("need at least one draw");

    // Every element acts linearly on the input amplitude, so the detector
    // series for amplitude a is a times the unit-input series and each
    // draw's spectrum is |a|^2 times the unit spectrum.
    TimeSeries unit = sample_detector(net, cplx{1.0, 0.0}, duration, rate);
    Spectrum base = psd(unit);

    MixtureResult result;
    switch (ensemble.kind) {
        case EnsembleSpec::Kind::Point:
            result.mean_alpha_sq = std::norm(ensemble.alpha);
            result.draws = 1;
            break;
        case EnsembleSpec::Kind::Thermal: {
            double sum = 0.0;
            for (int i = 0; i < n_draws; ++i)
                sum += std::norm(thermal_draw(ensemble.nbar, seed, (std::uint64_t)i));
            result.mean_alpha_sq = sum / n_draws;
            result.draws = n_draws;
            break;
        }
        case EnsembleSpec::Kind::Mixture: {
            double sum = 0.0;
            for (const auto& [a, w] : ensemble.mixture) sum += w * std::norm(a);
            result.mean_alpha_sq = sum;
            result.draws = (int)ensemble.mixture.size();
            break;
        }
    }
    for (double& p : base.power) p *= result.mean_alpha_sq;
    base.floor_median *= result.mean_alpha_sq;
    result.spectrum = std::move(base);
    return result;
}

}  // namespace nmzi
