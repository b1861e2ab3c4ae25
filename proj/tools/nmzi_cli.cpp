#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nmzi/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<int> setup;
    std::optional<std::string> mode;
    std::optional<std::string> alpha;
    std::optional<double> rate, duration, psi0, phi0;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file (key = value text)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--setup", args.setup, "Interferometer setup, 1 or 2");
    cmd->add_option("--mode", args.mode,
                    "Setup-2 recombination: paper-literal or physical");
    cmd->add_option("--alpha", args.alpha, "Input coherent amplitude (a+bi)");
    cmd->add_option("--rate", args.rate, "Sample rate in Hz");
    cmd->add_option("--duration", args.duration, "Record length in seconds");
    cmd->add_option("--seed", args.seed, "RNG seed for ensemble draws");
    cmd->add_option("--psi0", args.psi0, "Shared Psi modulation amplitude (rad)");
    cmd->add_option("--phi0", args.phi0, "Shared Phi modulation amplitude (rad)");
}

nmzi::RunConfig resolve(const CommonArgs& args) {
    nmzi::RunConfig cfg;
    if (!args.config_path.empty()) cfg = nmzi::load_config(args.config_path);
    if (args.setup) cfg.setup = *args.setup;
    if (args.mode) {
        if (*args.mode == "paper-literal") cfg.setup2_mode = nmzi::Setup2Mode::PaperLiteral;
        else if (*args.mode == "physical") cfg.setup2_mode = nmzi::Setup2Mode::Physical;
        else throw nmzi::ConfigError("--mode must be paper-literal or physical");
    }
    if (args.alpha) {
        cfg.alpha = nmzi::parse_complex(*args.alpha);
        if (cfg.ensemble.kind == nmzi::EnsembleSpec::Kind::Point)
            cfg.ensemble.alpha = cfg.alpha;
    }
    if (args.rate) cfg.rate = *args.rate;
    if (args.duration) cfg.duration = *args.duration;
    if (args.seed) cfg.seed = *args.seed;
    if (args.psi0)
        for (auto& m : cfg.network.mirrors) m.psi0 = *args.psi0;
    if (args.phi0)
        for (auto& m : cfg.network.mirrors) m.phi0 = *args.phi0;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent-light simulator for a nested interferometer with "
                 "vibrating mirrors"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string out_dir = "out";
    int n_times = 1000;
    int cutoff = 0;
    bool dump_config = false;

    CLI::App* simulate =
        app.add_subcommand("simulate", "Sample the detector and emit spectrum artifacts");
    add_common(simulate, args);
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_flag("--dump-config", dump_config,
                       "Print the default config with documentation and exit");

    CLI::App* conformance = app.add_subcommand(
        "conformance", "Check graph propagation against the closed-form amplitudes");
    add_common(conformance, args);
    conformance->add_option("--times", n_times, "Number of random sample times");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "Check each element against the brute-force Fock-basis output");
    add_common(oracle, args);
    oracle->add_option("--cutoff", cutoff, "Photon-number cutoff (0 = automatic)");

    CLI::App* lines =
        app.add_subcommand("lines", "Print the first-order analytic line list as CSV");
    add_common(lines, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            if (dump_config) {
                std::cout << nmzi::default_config_text();
                return 0;
            }
            return nmzi::run_simulate(resolve(args), out_dir, std::cout);
        }
        if (conformance->parsed()) return nmzi::run_conformance(resolve(args), n_times, std::cout);
        if (oracle->parsed()) return nmzi::run_oracle(resolve(args), cutoff, std::cout);
        if (lines->parsed()) return nmzi::run_lines(resolve(args), std::cout);
    } catch (const nmzi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
