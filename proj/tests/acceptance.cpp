// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "nmzi/fock.hpp"
#include "nmzi/runner.hpp"

using namespace nmzi;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++failures;
}

void run(int criterion, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(criterion, pass, detail);
    } catch (const std::exception& e) {
        report(criterion, false, std::string("exception: ") + e.what());
    }
}

double peak_density(const Spectrum& s, double freq) {
    const long c = std::lround(freq / s.bin_hz) + (long)(s.power.size() / 2);
    double p = 0.0;
    for (long k = c - 2; k <= c + 2; ++k)
        if (k >= 0 && k < (long)s.power.size()) p = std::max(p, s.power[k]);
    return p;
}

// A Hann-windowed on-grid tone keeps 2/3 of its power in the center bin.
constexpr double kHannCenterBin = 1.5;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string membership(const PeakTable& peaks) {
    std::string s;
    for (const PeakEntry& e : peaks)
        if (e.present) s += e.mirror;
    return s.empty() ? "(none)" : s;
}

}  // namespace

int main() {
    const NetworkConfig defaults = NetworkConfig::defaults();
    const cplx alpha{1.0, 0.0};

    // Shared full-length spectra (2^20 samples each).
    Spectrum spec1, spec2lit, spec2phys;
    double seconds1 = 0.0;

    run(1, [&] {
        const Network net = Network::setup1(defaults);
        const auto t0 = std::chrono::steady_clock::now();
        spec1 = psd(sample_detector(net, alpha, 1024.0, 1024.0));
        seconds1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                       .count();
        const PeakTable peaks = peak_report(spec1, defaults.mirrors);
        const bool all = membership(peaks) == "ABCEF";
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "setup 1 present = %s (want ABCEF), 2^20 samples in %.2f s",
                      membership(peaks).c_str(), seconds1);
        return std::pair{all && seconds1 < 5.0, std::string(buf)};
    });

    run(2, [&] {
        const Network net = Network::setup2(defaults, Setup2Mode::PaperLiteral);
        spec2lit = psd(sample_detector(net, alpha, 1024.0, 1024.0));
        const PeakTable peaks = peak_report(spec2lit, defaults.mirrors);
        return std::pair{membership(peaks) == "ABC",
                         "setup 2 (paper-literal) present = " + membership(peaks) +
                             " (want ABC)"};
    });

    run(3, [&] {
        const Network net = Network::setup2(defaults, Setup2Mode::Physical);
        spec2phys = psd(sample_detector(net, alpha, 1024.0, 1024.0));
        const PeakTable peaks = peak_report(spec2phys, defaults.mirrors);
        bool abc = true;
        for (const PeakEntry& e : peaks)
            if (e.mirror == 'A' || e.mirror == 'B' || e.mirror == 'C')
                abc = abc && e.present;
        double worst_db = 1e9;
        for (char label : {'E', 'F'}) {
            const double f = defaults.mirror(label).freq_hz;
            const double drop =
                10.0 * std::log10(peak_density(spec1, f) / peak_density(spec2phys, f));
            worst_db = std::min(worst_db, drop);
        }
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "physical mode: A,B,C %s, E/F at least %.1f dB below setup 1",
                      abc ? "present" : "missing", worst_db);
        return std::pair{abc && worst_db >= 20.0, std::string(buf)};
    });

    run(4, [&] {
        std::ostringstream log;
        int worst = 0;
        for (auto [setup, mode] :
             {std::pair{1, Setup2Mode::PaperLiteral}, {2, Setup2Mode::PaperLiteral},
              {2, Setup2Mode::Physical}}) {
            RunConfig cfg;
            cfg.setup = setup;
            cfg.setup2_mode = mode;
            cfg.alpha = cplx{0.8, -0.3};
            worst = std::max(worst, run_conformance(cfg, 1000, log));
        }
        return std::pair{worst == 0,
                         "closed forms vs propagation, 1000 random times per variant"};
    });

    run(5, [&] {
        std::ostringstream log;
        bool pass = true;
        for (int setup : {1, 2}) {
            RunConfig cfg;
            cfg.setup = setup;
            cfg.alpha = alpha;  // every internal amplitude stays <= 1
            pass = pass && run_oracle(cfg, 20, log) == 0;
        }
        const BSMatrix half = bs_matrix({0.0, kPi / 2.0, 0.0});
        const double hom = std::abs(fock_bs_output(1, 1, half, 4).at(1, 1));
        pass = pass && hom < 1e-14;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "per-element fidelity >= 1-1e-8 at cutoff 20; |1,1> coincidence "
                      "amplitude %.1e",
                      hom);
        return std::pair{pass, std::string(buf)};
    });

    run(6, [&] {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> angle(-kPi, kPi), amp(0.0, 0.3),
            pick_t(0.0, 50.0), re(-1.5, 1.5);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            NetworkConfig cfg = NetworkConfig::defaults();
            for (int k = 0; k < 4; ++k) {
                cfg.bs_phi[k] = angle(rng);
                cfg.bs_psi[k] = angle(rng);
            }
            const double psi0 = amp(rng), phi0 = amp(rng);
            for (auto& m : cfg.mirrors) {
                m.psi0 = psi0;
                m.phi0 = phi0;
            }
            const cplx a{re(rng), re(rng)};
            const Network net = i % 3 == 0
                                    ? Network::setup1(cfg)
                                    : Network::setup2(cfg, i % 3 == 1
                                                               ? Setup2Mode::PaperLiteral
                                                               : Setup2Mode::Physical);
            const double err =
                std::abs(net.propagate(a, pick_t(rng)).terminal_power() - std::norm(a));
            worst = std::max(worst, err / std::max(std::norm(a), 1e-6));
        }
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "10^4 random configurations, worst relative leak %.2e", worst);
        return std::pair{worst < 1e-12, std::string(buf)};
    });

    run(7, [&] {
        double worst_rel = 0.0;
        const LineList lines1 =
            analytic_lines(1, Setup2Mode::PaperLiteral, defaults, alpha);
        for (const SpectralLine& l : lines1) {
            if (l.freq_hz == 0.0) continue;
            const double numeric =
                peak_density(spec1, l.freq_hz) * spec1.bin_hz * kHannCenterBin;
            worst_rel = std::max(worst_rel,
                                 std::abs(numeric - l.weight.real()) / l.weight.real());
        }
        double pmin = 1e300, pmax = 0.0;
        for (char label : {'A', 'B', 'C'}) {
            const double p = peak_density(spec2lit, defaults.mirror(label).freq_hz);
            pmin = std::min(pmin, p);
            pmax = std::max(pmax, p);
        }
        const double spread = pmax / pmin - 1.0;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "setup-1 peaks vs Bessel weights within %.1f%%; setup-2 A,B,C "
                      "spread %.1f%%",
                      100.0 * worst_rel, 100.0 * spread);
        return std::pair{worst_rel < 0.10 && spread < 0.05, std::string(buf)};
    });

    run(8, [&] {
        NetworkConfig still = defaults;
        for (auto& m : still.mirrors) {
            m.psi0 = 0.0;
            m.phi0 = 0.0;
        }
        const double lambda0 = kPi + still.bs_psi[1] + still.bs_psi[2];
        const double residual0 = std::abs(verify_phase_relation(still, lambda0, 0.4));

        const Network phys = Network::setup2(defaults, Setup2Mode::Physical);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> pick_t(0.0, 100.0);
        bool bounded = true;
        for (int i = 0; i < 100; ++i) {
            const double t = pick_t(rng);
            const double leak = std::abs(phys.propagate(alpha, t).at("L7"));
            const double res = std::abs(verify_phase_relation(defaults, phys.lambda(), t));
            bounded = bounded && leak <= std::abs(alpha) * res / 2.0 + 1e-12;
        }
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "zero-modulation residual %.1e; leakage bounded by |alpha| "
                      "|residual| / 2 at 100 times",
                      residual0);
        return std::pair{residual0 < 1e-14 && bounded, std::string(buf)};
    });

    run(9, [&] {
        EnsembleSpec thermal;
        thermal.kind = EnsembleSpec::Kind::Thermal;
        thermal.nbar = 1.0;
        bool same = true;
        double mean = 0.0;
        for (int setup : {1, 2}) {
            const Network net = setup == 1
                                    ? Network::setup1(defaults)
                                    : Network::setup2(defaults, Setup2Mode::PaperLiteral);
            const Spectrum& point = setup == 1 ? spec1 : spec2lit;
            const MixtureResult r =
                classical_mixture_spectrum(thermal, net, 64.0, 1024.0, 1000, 11);
            mean = r.mean_alpha_sq;
            same = same && membership(peak_report(r.spectrum, defaults.mirrors)) ==
                               membership(peak_report(point, defaults.mirrors));
        }
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "thermal nbar=1, 1000 draws: membership preserved, mean |a|^2 = "
                      "%.3f",
                      mean);
        return std::pair{same && std::abs(mean - 1.0) < 0.05, std::string(buf)};
    });

    run(10, [&] {
        RunConfig cfg;
        cfg.duration = 64.0;
        cfg.ensemble.kind = EnsembleSpec::Kind::Thermal;
        cfg.ensemble.nbar = 1.0;
        cfg.draws = 200;
        std::ostringstream log;
        run_simulate(cfg, "acceptance_det_a", log);
        run_simulate(cfg, "acceptance_det_b", log);
        bool same = true;
        for (const char* name : {"spectrum.csv", "peaks.json", "summary.txt"})
            same = same && slurp(std::filesystem::path("acceptance_det_a") / name) ==
                               slurp(std::filesystem::path("acceptance_det_b") / name);
        std::filesystem::remove_all("acceptance_det_a");
        std::filesystem::remove_all("acceptance_det_b");
        return std::pair{same, std::string("repeated run is byte-identical")};
    });

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
