#include "nmzi/runner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "json.hpp"
#include "nmzi/fock.hpp"

namespace nmzi {

namespace {

std::string mode_name(Setup2Mode m) {
    return m == Setup2Mode::PaperLiteral ? "paper-literal" : "physical";
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

EnsembleSpec effective_ensemble(const RunConfig& cfg) {
    EnsembleSpec ens = cfg.ensemble;
    if (ens.kind == EnsembleSpec::Kind::Point) ens.alpha = cfg.alpha;
    return ens;
}

}  // namespace

int run_simulate(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    cfg.validate();
    const Network net = cfg.build_network();
    const MixtureResult result = classical_mixture_spectrum(
        effective_ensemble(cfg), net, cfg.duration, cfg.rate, cfg.draws, cfg.seed);
    const PeakTable peaks =
        peak_report(result.spectrum, net.config().mirrors, cfg.threshold_db);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    {
        std::ofstream csv(dir / "spectrum.csv", std::ios::binary);
        csv << "freq_hz,power\n";
        const Spectrum& s = result.spectrum;
        for (size_t k = 0; k < s.freqs.size(); ++k)
            csv << sci(s.freqs[k]) << ',' << sci(s.power[k]) << '\n';
    }

    std::string membership;
    nlohmann::json jpeaks = nlohmann::json::array();
    for (const PeakEntry& e : peaks) {
        jpeaks.push_back({{"mirror", std::string(1, e.mirror)},
                          {"freq_hz", e.freq_hz},
                          {"power", e.power},
                          {"prominence_db", e.prominence_db},
                          {"present", e.present}});
        if (e.present) {
            if (!membership.empty()) membership += ' ';
            membership += e.mirror;
        }
    }
    bool degenerate = true;
    for (const MirrorSpec& m : net.config().mirrors)
        if (!m.modulation_cancels()) degenerate = false;

    nlohmann::json j{{"setup", cfg.setup},
                     {"threshold_db", cfg.threshold_db},
                     {"bin_hz", result.spectrum.bin_hz},
                     {"total_power", result.spectrum.total_power()},
                     {"mean_alpha_sq", result.mean_alpha_sq},
                     {"draws", result.draws},
                     {"peaks", jpeaks}};
    if (cfg.setup == 2) j["mode"] = mode_name(cfg.setup2_mode);
    {
        std::ofstream out(dir / "peaks.json", std::ios::binary);
        out << j.dump(2) << '\n';
    }

    {
        std::ofstream out(dir / "summary.txt", std::ios::binary);
        out << "setup: " << cfg.setup << '\n';
        if (cfg.setup == 2) out << "mode: " << mode_name(cfg.setup2_mode) << '\n';
        out << "samples: " << result.spectrum.freqs.size() << " at " << cfg.rate
            << " Hz for " << cfg.duration << " s\n";
        out << "detector power: " << sci(result.spectrum.total_power()) << '\n';
        out << "present mirrors (>= " << cfg.threshold_db
            << " dB): " << (membership.empty() ? "(none)" : membership) << '\n';
        if (degenerate)
            out << "note: degenerate modulation (psi0 == phi0 on every mirror); "
                   "the phase modulation cancels and no sidebands are expected\n";
    }

    log << "wrote " << (dir / "spectrum.csv").string() << ", "
        << (dir / "peaks.json").string() << ", " << (dir / "summary.txt").string()
        << "\npresent: " << (membership.empty() ? "(none)" : membership) << '\n';
    return 0;
}

int run_conformance(const RunConfig& cfg, int n_times, std::ostream& log) {
    cfg.validate();
    if (n_times < 1) throw ConfigError("need at least one sample time");
    const Network net = cfg.build_network();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> pick_t(0.0, 100.0);

    double worst = 0.0;
    std::string worst_mode;
    int checked = 0;
    for (int i = 0; i < n_times; ++i) {
        const double t = pick_t(rng);
        const ModeAmplitudes amps = net.propagate(cfg.alpha, t);
        for (const ModeExpectation& e :
             closed_form_modes(cfg.setup, cfg.setup2_mode, cfg.network, cfg.alpha, t)) {
            const double err = std::abs(amps.at(e.mode) - e.value);
            ++checked;
            if (err > worst) {
                worst = err;
                worst_mode = e.mode + " (" + e.label + ")";
            }
            if (err > 1e-12) {
                log << "FAIL mode " << e.mode << " [" << e.label << "] at t = " << t
                    << ": |propagated - closed form| = " << err << '\n';
                return 3;
            }
        }
        const double beta_err =
            std::abs(net.detector(cfg.alpha, t) -
                     closed_form_beta(cfg.setup, cfg.setup2_mode, cfg.network, cfg.alpha, t));
        ++checked;
        if (beta_err > 1e-12) {
            log << "FAIL detector amplitude at t = " << t
                << ": |propagated - closed form| = " << beta_err << '\n';
            return 3;
        }
        if (beta_err > worst) {
            worst = beta_err;
            worst_mode = "detector";
        }
    }

    // Phase relation at zero modulation with the tuned alignment phase.
    NetworkConfig still = cfg.network;
    for (MirrorSpec& m : still.mirrors) {
        m.psi0 = 0.0;
        m.phi0 = 0.0;
    }
    const double lambda = kPi + still.bs_psi[1] + still.bs_psi[2];
    const double residual = std::abs(verify_phase_relation(still, lambda, 0.0));

    log << "conformance: " << checked << " closed-form values over " << n_times
        << " times, all within 1e-12\n"
        << "worst mismatch " << worst << " at " << (worst_mode.empty() ? "-" : worst_mode)
        << "\nphase-relation residual at zero modulation: " << residual << '\n';
    if (residual > 1e-12) {
        log << "FAIL phase relation residual exceeds 1e-12\n";
        return 3;
    }
    return 0;
}

int run_oracle(const RunConfig& cfg, int cutoff, std::ostream& log) {
    cfg.validate();
    if (std::abs(cfg.alpha) > 2.0)
        throw ConfigError("|alpha| must be <= 2 for the oracle cutoff to converge");
    const Network net = cfg.build_network();
    const ModeAmplitudes amps = net.propagate(cfg.alpha, 0.0);

    bool all_pass = true;
    for (const Element& e : net.elements()) {
        BSMatrix b;
        cplx a_top{0.0, 0.0}, a_left{0.0, 0.0};
        switch (e.kind) {
            case Element::Kind::BeamSplitter:
                b = bs_matrix(e.angles);
                break;
            case Element::Kind::Mirror:
                b = mirror_matrix(net.config().mirror(e.mirror_label), 0.0);
                break;
            case Element::Kind::PhaseShift:
                b = BSMatrix{cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0},
                             std::polar(1.0, e.phase)};
                break;
        }
        if (!e.in_top.empty()) a_top = amps.at(e.in_top);
        if (!e.in_left.empty()) a_left = amps.at(e.in_left);
        const int cut =
            cutoff > 0 ? cutoff : default_cutoff(std::abs(a_top), std::abs(a_left));
        try {
            const double fidelity = oracle_compare(a_top, a_left, b, cut);
            const bool pass = fidelity >= 1.0 - 1e-8;
            all_pass = all_pass && pass;
            log << e.id << ": fidelity = " << std::setprecision(15) << fidelity
                << " (cutoff " << cut << ") " << (pass ? "PASS" : "FAIL") << '\n';
        } catch (const TruncationError& err) {
            all_pass = false;
            log << e.id << ": truncation error, achieved norm = " << err.achieved_norm
                << " at cutoff " << cut << " FAIL\n";
        }
    }
    log << (all_pass ? "oracle: all elements pass\n" : "oracle: FAIL\n");
    return all_pass ? 0 : 4;
}

int run_lines(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    LineList lines;
    try {
        lines = analytic_lines(cfg.setup, cfg.setup2_mode, cfg.network, cfg.alpha);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    std::sort(lines.begin(), lines.end(),
              [](const SpectralLine& a, const SpectralLine& b) { return a.freq_hz < b.freq_hz; });
    out << "freq_hz,power\n";
    for (const SpectralLine& l : lines)
        out << sci(l.freq_hz) << ',' << sci(l.weight.real()) << '\n';
    return 0;
}

}  // namespace nmzi
