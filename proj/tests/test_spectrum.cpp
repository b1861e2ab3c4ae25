#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>

#include "nmzi/spectrum.hpp"

using namespace nmzi;
using doctest::Approx;

namespace {

TimeSeries synthetic(double rate, double duration,
                     const std::function<cplx(double)>& f) {
    TimeSeries ts;
    ts.rate = rate;
    ts.duration = duration;
    const size_t n = (size_t)std::llround(rate * duration);
    ts.samples.resize(n);
    for (size_t k = 0; k < n; ++k) ts.samples[k] = f((double)k / rate);
    return ts;
}

size_t bin_at(const Spectrum& s, double freq) {
    return (size_t)(std::lround(freq / s.bin_hz) + (long)(s.power.size() / 2));
}

}  // namespace

TEST_CASE("psd preserves total power exactly") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 1.0);
    TimeSeries ts = synthetic(256.0, 16.0, [&](double) { return cplx{g(rng), g(rng)}; });
    const Spectrum s = psd(ts);
    double mean_sq = 0.0;
    for (const cplx& x : ts.samples) mean_sq += std::norm(x);
    mean_sq /= (double)ts.samples.size();
    CHECK(s.total_power() == Approx(mean_sq).epsilon(1e-12));
}

TEST_CASE("psd scales quadratically with the amplitude") {
    TimeSeries a = synthetic(256.0, 8.0, [](double t) {
        return std::polar(1.0, 0.2 * std::sin(2.0 * kPi * 16.0 * t));
    });
    TimeSeries b = a;
    for (cplx& x : b.samples) x *= 2.0;
    const Spectrum sa = psd(a), sb = psd(b);
    for (size_t k = 0; k < sa.power.size(); k += 97)
        CHECK(sb.power[k] == Approx(4.0 * sa.power[k]).epsilon(1e-12));
}

TEST_CASE("psd of a real tone is symmetric in frequency") {
    TimeSeries ts = synthetic(256.0, 16.0,
                              [](double t) { return cplx{std::cos(2.0 * kPi * 20.0 * t), 0.0}; });
    const Spectrum s = psd(ts);
    const size_t plus = bin_at(s, 20.0), minus = bin_at(s, -20.0);
    CHECK(s.power[plus] == Approx(s.power[minus]).epsilon(1e-10));
    CHECK(s.power[plus] > 1e3 * s.floor_median);
}

TEST_CASE("phase-modulation sidebands follow the first Bessel weight") {
    const double m = 0.01, f = 16.0;
    TimeSeries ts = synthetic(512.0, 64.0, [&](double t) {
        return std::polar(1.0, m * std::sin(2.0 * kPi * f * t));
    });
    const Spectrum s = psd(ts);
    const double carrier = s.power[bin_at(s, 0.0)];
    const double upper = s.power[bin_at(s, f)];
    const double lower = s.power[bin_at(s, -f)];
    const double expected = std::pow(m / 2.0, 2);  // J1(m)^2/J0(m)^2 to first order
    CHECK(upper / carrier == Approx(expected).epsilon(0.05));
    CHECK(lower / carrier == Approx(expected).epsilon(0.05));
}

TEST_CASE("sampling guards reject unresolvable requests") {
    const Network net = Network::setup1(NetworkConfig::defaults());
    CHECK_THROWS_AS(sample_detector(net, cplx{1.0, 0.0}, 64.0, 100.0),
                    std::invalid_argument);  // rate below 20x f_max
    CHECK_THROWS_AS(sample_detector(net, cplx{1.0, 0.0}, 2.0, 1024.0),
                    std::invalid_argument);  // duration below 10x the gap time
    TimeSeries tiny;
    tiny.rate = 256.0;
    tiny.samples.resize(100);
    CHECK_THROWS_AS(psd(tiny), std::invalid_argument);
}

TEST_CASE("peak report flags the mirror lines of a short run") {
    const NetworkConfig cfg = NetworkConfig::defaults();
    const Network net = Network::setup1(cfg);
    const Spectrum s = psd(sample_detector(net, cplx{1.0, 0.0}, 8.0, 1024.0));
    const PeakTable peaks = peak_report(s, cfg.mirrors);
    REQUIRE(peaks.size() == 5);
    for (const PeakEntry& e : peaks) {
        INFO("mirror ", e.mirror);
        CHECK(e.present);
        CHECK(e.prominence_db >= kPeakThresholdDb);
    }
}

TEST_CASE("peak report rejects unresolvable spectra") {
    Spectrum coarse;
    coarse.bin_hz = 8.0;
    coarse.freqs = {-8.0, 0.0, 8.0};
    coarse.power = {0.0, 1.0, 0.0};
    CHECK_THROWS_AS(peak_report(coarse, NetworkConfig::defaults().mirrors),
                    std::invalid_argument);
}

TEST_CASE("analytic line list ratios and guards") {
    const NetworkConfig cfg = NetworkConfig::defaults();
    const LineList s1 = analytic_lines(1, Setup2Mode::PaperLiteral, cfg, cplx{1.0, 0.0});
    auto power_at = [](const LineList& lines, double f) {
        for (const SpectralLine& l : lines)
            if (l.freq_hz == f) return l.weight.real();
        return -1.0;
    };
    // weight coefficient 1/4 on mirror C vs 1/8 on mirror A: 4x power
    CHECK(power_at(s1, 41.0) / power_at(s1, 31.0) == Approx(4.0).epsilon(0.01));
    CHECK(power_at(s1, -41.0) == Approx(power_at(s1, 41.0)).epsilon(1e-12));

    const LineList s2 = analytic_lines(2, Setup2Mode::PaperLiteral, cfg, cplx{1.0, 0.0});
    CHECK(power_at(s2, 43.0) == -1.0);  // no line for mirror E
    CHECK(power_at(s2, 47.0) == -1.0);  // no line for mirror F
    CHECK(power_at(s2, 31.0) == Approx(power_at(s2, 37.0)).epsilon(1e-12));

    NetworkConfig loud = cfg;
    for (auto& m : loud.mirrors) m.psi0 = 0.5;
    CHECK_THROWS_AS(analytic_lines(1, Setup2Mode::PaperLiteral, loud, cplx{1.0, 0.0}),
                    std::domain_error);
}

TEST_CASE("quantum spectral density line list") {
    const cplx alpha{0.6, 0.8};
    const LineList lines = quantum_psd_lines(alpha, 5.0, 2.0);
    REQUIRE(lines.size() == 4);
    const double s = 2.0 * kPi * 4.0;
    CHECK(lines[0].freq_hz == 5.0);
    CHECK(std::abs(lines[0].weight - s * alpha * alpha) < 1e-14);
    CHECK(lines[1].freq_hz == -5.0);
    CHECK(std::abs(lines[1].weight - s * std::conj(alpha) * std::conj(alpha)) < 1e-14);
    CHECK(lines[2].freq_hz == -5.0);
    CHECK(lines[2].weight.real() == Approx(s * std::norm(alpha)).epsilon(1e-14));
    CHECK(lines[3].freq_hz == 5.0);
    CHECK(lines[3].weight.real() == Approx(s * (1.0 + std::norm(alpha))).epsilon(1e-14));
}

TEST_CASE("thermal draws are deterministic with the right variance") {
    const cplx first = thermal_draw(1.0, 7, 0);
    CHECK(thermal_draw(1.0, 7, 0) == first);
    CHECK(thermal_draw(1.0, 8, 0) != first);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) sum += std::norm(thermal_draw(1.0, 7, i));
    CHECK(sum / 20000.0 == Approx(1.0).epsilon(0.03));
}

TEST_CASE("ensemble validation and averaging") {
    EnsembleSpec bad;
    bad.kind = EnsembleSpec::Kind::Mixture;
    bad.mixture = {{cplx{1.0, 0.0}, 0.7}, {cplx{0.5, 0.0}, 0.7}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.mixture = {{cplx{1.0, 0.0}, -0.5}, {cplx{0.5, 0.0}, 1.5}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    EnsembleSpec mix;
    mix.kind = EnsembleSpec::Kind::Mixture;
    mix.mixture = {{cplx{2.0, 0.0}, 0.25}, {cplx{0.0, 0.0}, 0.75}};
    const Network net = Network::setup1(NetworkConfig::defaults());
    const MixtureResult r = classical_mixture_spectrum(mix, net, 8.0, 1024.0, 1, 1);
    CHECK(r.mean_alpha_sq == Approx(1.0).epsilon(1e-15));
    CHECK(r.spectrum.total_power() == Approx(1.0).epsilon(1e-10));
}
