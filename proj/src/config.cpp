#include "nmzi/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nmzi {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': " + text);
    }
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for '" + key + "': " + text);
    }
}

void parse_ensemble(const std::string& text, RunConfig& cfg) {
    if (text == "none") {
        cfg.ensemble.kind = EnsembleSpec::Kind::Point;
        return;
    }
    if (text.rfind("thermal:", 0) == 0) {
        cfg.ensemble.kind = EnsembleSpec::Kind::Thermal;
        cfg.ensemble.nbar = parse_double(trim(text.substr(8)), "ensemble");
        return;
    }
    if (text.rfind("mixture:", 0) == 0) {
        // mixture:(alpha,weight);(alpha,weight);...
        cfg.ensemble.kind = EnsembleSpec::Kind::Mixture;
        cfg.ensemble.mixture.clear();
        std::stringstream ss(text.substr(8));
        std::string item;
        while (std::getline(ss, item, ';')) {
            item = trim(item);
            if (item.empty()) continue;
            if (item.front() != '(' || item.back() != ')')
                throw ConfigError("mixture entry must look like (alpha, weight): " + item);
            const std::string body = item.substr(1, item.size() - 2);
            const size_t comma = body.rfind(',');
            if (comma == std::string::npos)
                throw ConfigError("mixture entry must look like (alpha, weight): " + item);
            cfg.ensemble.mixture.emplace_back(
                parse_complex(trim(body.substr(0, comma))),
                parse_double(trim(body.substr(comma + 1)), "mixture weight"));
        }
        if (cfg.ensemble.mixture.empty()) throw ConfigError("empty mixture ensemble");
        return;
    }
    throw ConfigError("ensemble must be none, thermal:<nbar> or mixture:(a,w);...");
}

}  // namespace

cplx parse_complex(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty()) throw ConfigError("empty complex literal");
    if (text.front() == '(' && text.back() == ')') {
        const std::string body = text.substr(1, text.size() - 2);
        const size_t comma = body.find(',');
        if (comma == std::string::npos)
            throw ConfigError("expected (re, im): " + text);
        return {parse_double(trim(body.substr(0, comma)), "complex"),
                parse_double(trim(body.substr(comma + 1)), "complex")};
    }
    // a, bi, a+bi, a-bi
    std::string s = text;
    bool imag_only = false;
    if (!s.empty() && (s.back() == 'i' || s.back() == 'j')) imag_only = true;
    // find the split sign (not an exponent sign, not the leading sign)
    size_t split = std::string::npos;
    for (size_t k = 1; k < s.size(); ++k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
            split = k;
    }
    if (split == std::string::npos) {
        if (imag_only) {
            std::string im = s.substr(0, s.size() - 1);
            if (im.empty() || im == "+" || im == "-") im += "1";
            return {0.0, parse_double(im, "complex")};
        }
        return {parse_double(s, "complex"), 0.0};
    }
    if (!imag_only) throw ConfigError("expected a+bi form: " + text);
    std::string re = s.substr(0, split);
    std::string im = s.substr(split, s.size() - split - 1);
    if (im == "+" || im == "-") im += "1";
    return {parse_double(re, "complex"), parse_double(im, "complex")};
}

void RunConfig::validate() const {
    if (setup != 1 && setup != 2) throw ConfigError("setup must be 1 or 2");
    if (!(rate > 0.0)) throw ConfigError("rate must be positive");
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");
    if (draws < 1) throw ConfigError("draws must be >= 1");
    if (!(threshold_db > 0.0)) throw ConfigError("threshold_db must be positive");
    try {
        network.validate();
        ensemble.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Network RunConfig::build_network() const {
    return setup == 1 ? Network::setup1(network) : Network::setup2(network, setup2_mode);
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    bool in_mirrors = false;
    int mirror_rows = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[mirrors]") {
                in_mirrors = true;
                continue;
            }
            throw ConfigError("unknown section at line " + std::to_string(lineno) + ": " + line);
        }

        if (in_mirrors && line.find('=') == std::string::npos) {
            // label freq_hz psi0 phi0
            std::stringstream ss(line);
            std::string label;
            double freq, psi0, phi0;
            if (!(ss >> label >> freq >> psi0 >> phi0) || label.size() != 1)
                throw ConfigError("bad mirror row at line " + std::to_string(lineno) +
                                  " (want: label freq_hz psi0 phi0)");
            std::string tail;
            if (ss >> tail)
                throw ConfigError("trailing tokens in mirror row at line " +
                                  std::to_string(lineno));
            MirrorSpec& m = cfg.network.mirror(label[0]);
            m.freq_hz = freq;
            m.psi0 = psi0;
            m.phi0 = phi0;
            ++mirror_rows;
            continue;
        }
        in_mirrors = false;

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw ConfigError("empty value for '" + key + "'");

        if (key == "setup") {
            cfg.setup = (int)parse_u64(val, key);
        } else if (key == "mode") {
            if (val == "paper-literal") cfg.setup2_mode = Setup2Mode::PaperLiteral;
            else if (val == "physical") cfg.setup2_mode = Setup2Mode::Physical;
            else throw ConfigError("mode must be paper-literal or physical");
        } else if (key == "alpha") {
            cfg.alpha = parse_complex(val);
        } else if (key == "rate") {
            cfg.rate = parse_double(val, key);
        } else if (key == "duration") {
            cfg.duration = parse_double(val, key);
        } else if (key == "seed") {
            cfg.seed = parse_u64(val, key);
        } else if (key == "draws") {
            cfg.draws = (int)parse_u64(val, key);
        } else if (key == "threshold_db") {
            cfg.threshold_db = parse_double(val, key);
        } else if (key == "ensemble") {
            parse_ensemble(val, cfg);
        } else if (key == "lambda") {
            if (val == "auto") cfg.network.lambda.reset();
            else cfg.network.lambda = parse_double(val, key);
        } else if (key == "psi0") {
            for (auto& m : cfg.network.mirrors) m.psi0 = parse_double(val, key);
        } else if (key == "phi0") {
            for (auto& m : cfg.network.mirrors) m.phi0 = parse_double(val, key);
        } else if (key.size() == 4 && (key.rfind("phi", 0) == 0 || key.rfind("psi", 0) == 0) &&
                   key[3] >= '1' && key[3] <= '4') {
            const int idx = key[3] - '1';
            if (key[1] == 'h') cfg.network.bs_phi[idx] = parse_double(val, key);
            else cfg.network.bs_psi[idx] = parse_double(val, key);
        } else {
            throw ConfigError("unknown key '" + key + "' at line " + std::to_string(lineno));
        }
    }
    if (cfg.ensemble.kind == EnsembleSpec::Kind::Point) cfg.ensemble.alpha = cfg.alpha;
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

std::string default_config_text() {
    return R"(# Run description. Every key is optional; these are the defaults.

setup = 1                 # 1 (all five mirrors) or 2 (rerouted recombination)
mode = paper-literal      # setup-2 recombination: paper-literal | physical
alpha = 1                 # input coherent amplitude: a, bi, a+bi or (re, im)
rate = 1024               # samples per second (>= 20x fastest mirror)
duration = 1024           # seconds (>= 10 / smallest frequency gap)
seed = 1                  # RNG seed for ensemble draws
ensemble = none           # none | thermal:<nbar> | mixture:(a,w);(a,w);...
draws = 1000              # thermal ensemble sample count
threshold_db = 20         # peak presence threshold above the floor
lambda = auto             # alignment phase before BS3 (setup 2); auto = tuned

# Constant beam-splitter Euler angles (radians).
phi1 = 0
phi2 = 0
phi3 = 0
phi4 = 0
psi1 = 0
psi2 = 0
psi3 = 0
psi4 = 0

# Shared modulation amplitudes, applied to all five mirrors.
psi0 = 0.02
phi0 = 0

[mirrors]
# label  freq_hz  psi0  phi0
A  31  0.02  0
B  37  0.02  0
C  41  0.02  0
E  43  0.02  0
F  47  0.02  0
)";
}

}  // namespace nmzi
