#include "nmzi/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace nmzi {

namespace {

double wrap_pi(double x) {
    // wrap to (-pi, pi]
    x = std::fmod(x, 2.0 * kPi);
    if (x <= -kPi) x += 2.0 * kPi;
    if (x > kPi) x -= 2.0 * kPi;
    return x;
}

cplx phasor(double phase) { return std::polar(1.0, phase); }

constexpr double kTau1 = 1.0 / 3.0;  // BS1: 1:2 split
constexpr double kTau2 = 0.5;        // BS2: balanced
constexpr double kTau3 = 0.5;        // BS3: balanced
constexpr double kTau4 = 1.0 / 3.0;  // BS4: recombines the 2/3 + 1/3 arms

}  // namespace

NetworkConfig NetworkConfig::defaults() {
    NetworkConfig cfg;
    // Distinct, non-harmonically-related frequencies; equal amplitudes.
    cfg.mirrors = {MirrorSpec{'A', 31.0, 0.02, 0.0}, MirrorSpec{'B', 37.0, 0.02, 0.0},
                   MirrorSpec{'C', 41.0, 0.02, 0.0}, MirrorSpec{'E', 43.0, 0.02, 0.0},
                   MirrorSpec{'F', 47.0, 0.02, 0.0}};
    return cfg;
}

const MirrorSpec& NetworkConfig::mirror(char label) const {
    for (const auto& m : mirrors)
        if (m.label == label) return m;
    throw std::invalid_argument(std::string("no mirror labeled ") + label);
}

MirrorSpec& NetworkConfig::mirror(char label) {
    for (auto& m : mirrors)
        if (m.label == label) return m;
    throw std::invalid_argument(std::string("no mirror labeled ") + label);
}

double NetworkConfig::max_mirror_freq() const {
    double f = 0.0;
    for (const auto& m : mirrors) f = std::max(f, m.freq_hz);
    return f;
}

double NetworkConfig::min_freq_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mirrors.size(); ++i)
        for (size_t j = i + 1; j < mirrors.size(); ++j)
            gap = std::min(gap, std::abs(mirrors[i].freq_hz - mirrors[j].freq_hz));
    return gap;
}

void NetworkConfig::validate() const {
    for (const auto& m : mirrors) m.validate();
    if (min_freq_gap() <= 0.0)
        throw std::invalid_argument("mirror frequencies must be pairwise distinct");
    for (const auto& m : mirrors) {
        if (m.psi0 != mirrors[0].psi0 || m.phi0 != mirrors[0].phi0)
            throw std::invalid_argument("all mirrors must share the same phase amplitudes");
    }
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(bs_phi[i]) || !std::isfinite(bs_psi[i]))
            throw std::invalid_argument("constant Euler angles must be finite");
    if (lambda && !std::isfinite(*lambda))
        throw std::invalid_argument("lambda must be finite");
}

cplx ModeAmplitudes::at(const std::string& mode) const {
    auto it = amps.find(mode);
    if (it == amps.end()) throw std::invalid_argument("unknown mode label: " + mode);
    return it->second;
}

double ModeAmplitudes::terminal_power() const {
    double p = 0.0;
    for (const auto& mode : Network::terminal_modes()) p += std::norm(at(mode));
    return p;
}

const std::vector<std::string>& Network::terminal_modes() {
    static const std::vector<std::string> modes{"a", "b", "c", "d", "e", "f", "g", "h"};
    return modes;
}

double tuned_lambda(const NetworkConfig& cfg, Setup2Mode mode) {
    const double psi23 = cfg.bs_psi[1] + cfg.bs_psi[2];
    if (mode == Setup2Mode::PaperLiteral) return kPi + psi23;
    // Honest propagation needs the opposite sign on psi2+psi3 for the
    // carrier to cancel toward mirror F.
    return kPi - psi23;
}

double verify_phase_relation(const NetworkConfig& cfg, double lambda, double t) {
    const double psi23 = cfg.bs_psi[1] + cfg.bs_psi[2];
    const double mod_ab = cfg.mirror('A').modulation(t) + cfg.mirror('B').modulation(t);
    return wrap_pi(psi23 - (mod_ab - kPi + lambda));
}

Network::Network(int setup, Setup2Mode mode, NetworkConfig cfg)
    : setup_(setup), mode_(mode), cfg_(std::move(cfg)) {
    cfg_.validate();
    lambda_ = cfg_.lambda ? *cfg_.lambda : tuned_lambda(cfg_, mode_);
    build();
    compile();
}

Network Network::setup1(const NetworkConfig& cfg) { return Network(1, Setup2Mode::PaperLiteral, cfg); }

Network Network::setup2(const NetworkConfig& cfg, Setup2Mode mode) {
    return Network(2, mode, cfg);
}

void Network::build() {
    auto bs = [&](int i, double tau, std::string id, std::string it, std::string il,
                  std::string ot, std::string ol, int dark) {
        Element e;
        e.kind = Element::Kind::BeamSplitter;
        e.id = std::move(id);
        e.angles = angles_from_transmittance(tau, cfg_.bs_phi[i], cfg_.bs_psi[i]);
        e.in_top = std::move(it);
        e.in_left = std::move(il);
        e.out_top = std::move(ot);
        e.out_left = std::move(ol);
        e.dark_port = dark;
        elements_.push_back(std::move(e));
    };
    auto mirror = [&](char label, std::string it, std::string il, std::string ot,
                      std::string ol) {
        Element e;
        e.kind = Element::Kind::Mirror;
        e.id = std::string(1, label);
        e.mirror_label = label;
        e.in_top = std::move(it);
        e.in_left = std::move(il);
        e.out_top = std::move(ot);
        e.out_left = std::move(ol);
        elements_.push_back(std::move(e));
    };

    const bool literal = (setup_ == 1) || (mode_ == Setup2Mode::PaperLiteral);

    bs(0, kTau1, "BS1", "T1", "L1", "T8", "L2", -1);
    mirror('E', "T2", "L2", "T3", "a");
    bs(1, kTau2, "BS2", "T3", "L3", "T5", "L4", -1);
    mirror('A', "T4", "L4", "T6", "b");
    mirror('B', "T5", "L5", "c", "L6");
    if (setup_ == 2) {
        Element e;
        e.kind = Element::Kind::PhaseShift;
        e.id = "LAMBDA";
        e.phase = lambda_;
        e.in_left = "L6";
        e.out_left = "L6p";
        elements_.push_back(std::move(e));
    }
    const std::string inner_out = setup_ == 2 ? "L6p" : "L6";
    // Setup 1: the inner loop recombines toward mirror F (left port dark).
    // Setup 2: the shifted arm flips the interference, the F port is dark.
    int bs3_dark = -1;
    if (setup_ == 1)
        bs3_dark = 1;
    else if (literal)
        bs3_dark = 0;
    bs(2, kTau3, "BS3", "T6", inner_out, "L7", "d", bs3_dark);
    mirror('F', "T7", "L7", "T9", "e");
    mirror('C', "T8", "L8", "f", "L9");
    bs(3, kTau4, "BS4", "T9", "L9", "g", "h", setup_ == 1 ? 0 : -1);
}

void Network::compile() {
    mode_index_.clear();
    steps_.clear();
    auto index_of = [&](const std::string& name) {
        auto [it, inserted] = mode_index_.emplace(name, (int)mode_index_.size());
        return it->second;
    };

    // Validate wiring before compiling: every input port must be fed by a
    // vacuum source, the beam source, or exactly one upstream output.
    std::set<std::string> defined{"T1", "L1", "T2", "L3", "T4", "L5", "T7", "L8"};
    std::set<std::string> produced;
    for (const auto& e : elements_) {
        for (const std::string* port : {&e.in_top, &e.in_left}) {
            if (port->empty()) continue;
            if (!defined.count(*port))
                throw std::invalid_argument("network wiring: input mode " + *port +
                                            " of " + e.id + " is not defined upstream");
        }
        for (const std::string* port : {&e.out_top, &e.out_left}) {
            if (port->empty()) continue;
            if (!produced.insert(*port).second)
                throw std::invalid_argument("network wiring: mode " + *port +
                                            " produced twice");
            defined.insert(*port);
        }
    }
    for (const auto& mode : terminal_modes())
        if (!defined.count(mode))
            throw std::invalid_argument("network wiring: terminal mode " + mode +
                                        " is dangling");

    for (size_t i = 0; i < elements_.size(); ++i) {
        const Element& e = elements_[i];
        Step s;
        s.elem = (int)i;
        s.dark_port = e.dark_port;
        switch (e.kind) {
            case Element::Kind::BeamSplitter:
                s.kind = 0;
                s.constant = bs_matrix(e.angles);
                break;
            case Element::Kind::Mirror: {
                s.kind = 1;
                for (int k = 0; k < 5; ++k)
                    if (cfg_.mirrors[k].label == e.mirror_label) s.mirror_idx = k;
                break;
            }
            case Element::Kind::PhaseShift:
                s.kind = 2;
                s.phase_factor = phasor(e.phase);
                break;
        }
        if (!e.in_top.empty()) s.in_top = index_of(e.in_top);
        if (!e.in_left.empty()) s.in_left = index_of(e.in_left);
        if (!e.out_top.empty()) s.out_top = index_of(e.out_top);
        if (!e.out_left.empty()) s.out_left = index_of(e.out_left);
        steps_.push_back(s);
    }
    src_index_ = index_of("T1");
    det_index_ = index_of("h");
    for (const auto& mode : terminal_modes()) index_of(mode);
}

void Network::corrupt_swap_inputs(const std::string& element_id) {
    for (auto& e : elements_) {
        if (e.id == element_id) {
            std::swap(e.in_top, e.in_left);
            compile();
            return;
        }
    }
    throw std::invalid_argument("no element named " + element_id);
}

void Network::propagate_into(std::vector<cplx>& amps, cplx alpha_in, double t) const {
    if (!std::isfinite(t)) throw std::invalid_argument("propagate: t must be finite");
    std::fill(amps.begin(), amps.end(), cplx{0.0, 0.0});
    amps[src_index_] = alpha_in;

    for (const Step& s : steps_) {
        if (s.kind == 2) {
            amps[s.out_left] = s.phase_factor * amps[s.in_left];
            continue;
        }
        const BSMatrix b = s.kind == 0 ? s.constant : mirror_matrix(cfg_.mirrors[s.mirror_idx], t);
        const cplx a_top = s.in_top >= 0 ? amps[s.in_top] : cplx{};
        const cplx a_left = s.in_left >= 0 ? amps[s.in_left] : cplx{};
        cplx o_top, o_left;
        if (s.dark_port >= 0) {
            // Ideal recombination: the dark output is forced to zero and the
            // bright one keeps all power, its phase the mean of the two
            // single-arm inferences gamma_i = input_i / conj(B[bright][i]).
            const int bright = 1 - s.dark_port;
            const cplx c0 = bright == 0 ? b.b11 : b.b21;
            const cplx c1 = bright == 0 ? b.b12 : b.b22;
            const cplx g0 = std::abs(c0) > 0 ? a_top / std::conj(c0) : cplx{};
            const cplx g1 = std::abs(c1) > 0 ? a_left / std::conj(c1) : cplx{};
            cplx bright_amp;
            if (g0 == cplx{} || g1 == cplx{}) {
                // degenerate arm: fall back to the unitary action
                auto [ot, ol] = apply_bs(b, a_top, a_left);
                o_top = ot;
                o_left = ol;
                if (s.out_top >= 0) amps[s.out_top] = o_top;
                if (s.out_left >= 0) amps[s.out_left] = o_left;
                continue;
            }
            cplx u = std::sqrt(g0 * g1);
            if (std::real(std::conj(u) * (g0 + g1)) < 0.0) u = -u;
            bright_amp = std::sqrt(std::norm(a_top) + std::norm(a_left)) * (u / std::abs(u));
            o_top = bright == 0 ? bright_amp : cplx{};
            o_left = bright == 1 ? bright_amp : cplx{};
        } else {
            auto [ot, ol] = apply_bs(b, a_top, a_left);
            o_top = ot;
            o_left = ol;
        }
        if (s.out_top >= 0) amps[s.out_top] = o_top;
        if (s.out_left >= 0) amps[s.out_left] = o_left;
    }

    if (setup_ == 2 && mode_ == Setup2Mode::PaperLiteral) {
        // Phase substitution at the detector: the alignment relation trades
        // the constant -1 carried by the single bright arm for the
        // modulated phases of the inner mirrors. Unit modulus, so terminal
        // powers are untouched.
        const double mod_ab =
            cfg_.mirror('A').modulation(t) + cfg_.mirror('B').modulation(t);
        const double psi23 = cfg_.bs_psi[1] + cfg_.bs_psi[2];
        amps[det_index_] *= -phasor(mod_ab - lambda_ - psi23);
    }
}

ModeAmplitudes Network::propagate(cplx alpha_in, double t) const {
    std::vector<cplx> amps(mode_index_.size());
    propagate_into(amps, alpha_in, t);
    ModeAmplitudes out;
    out.time = t;
    for (const auto& [name, idx] : mode_index_) out.amps[name] = amps[idx];
    return out;
}

cplx Network::detector(cplx alpha_in, double t) const {
    thread_local std::vector<cplx> amps;
    amps.resize(mode_index_.size());
    propagate_into(amps, alpha_in, t);
    return amps[det_index_];
}

namespace {

struct Stage {
    const NetworkConfig& cfg;
    double t;
    double p1s, p1d, p2s, p2d, p3s, p3d, p4s, p4d;  // (psi+phi)/2 and (psi-phi)/2
    double mA, mB, mC, mE, mF;                      // (Psi_i(t) - Phi_i(t))/2

    Stage(const NetworkConfig& c, double time) : cfg(c), t(time) {
        p1s = 0.5 * (c.bs_psi[0] + c.bs_phi[0]);
        p1d = 0.5 * (c.bs_psi[0] - c.bs_phi[0]);
        p2s = 0.5 * (c.bs_psi[1] + c.bs_phi[1]);
        p2d = 0.5 * (c.bs_psi[1] - c.bs_phi[1]);
        p3s = 0.5 * (c.bs_psi[2] + c.bs_phi[2]);
        p3d = 0.5 * (c.bs_psi[2] - c.bs_phi[2]);
        p4s = 0.5 * (c.bs_psi[3] + c.bs_phi[3]);
        p4d = 0.5 * (c.bs_psi[3] - c.bs_phi[3]);
        mA = c.mirror('A').modulation(t);
        mB = c.mirror('B').modulation(t);
        mC = c.mirror('C').modulation(t);
        mE = c.mirror('E').modulation(t);
        mF = c.mirror('F').modulation(t);
    }
};

}  // namespace

cplx closed_form_beta(int setup, Setup2Mode mode, const NetworkConfig& cfg, cplx alpha,
                      double t) {
    const Stage s(cfg, t);
    if (setup == 1) {
        // Product of per-element phase factors; the inner-loop mirrors enter
        // at quarter weight and the outer ones at half weight, with B and C
        // opposite in sign to A, E, F.
        const double constant =
            0.5 * (cfg.bs_phi[0] + cfg.bs_phi[3]) + 0.25 * (cfg.bs_phi[1] + cfg.bs_psi[2]);
        return -alpha *
               phasor(constant + 0.5 * (s.mE + s.mF) + 0.25 * (s.mA - s.mB) - 0.5 * s.mC);
    }
    const double lambda = cfg.lambda ? *cfg.lambda : tuned_lambda(cfg, mode);
    if (mode == Setup2Mode::PaperLiteral) {
        const double psi23 = cfg.bs_psi[1] + cfg.bs_psi[2];
        return (alpha / 3.0) *
               phasor(s.p1s - s.p4s - lambda - psi23 + s.mA + s.mB - s.mC);
    }
    // Physical mode: honest interference of the leaked inner arm with the
    // outer arm at the final beam splitter.
    const cplx t3 = -alpha * std::sqrt(2.0 / 3.0) * phasor(-s.p1d + s.mE);
    const cplx a_arm = phasor(s.mA - s.p2d) * (-std::sqrt(0.5)) * t3;        // T6
    const cplx b_arm = -phasor(-s.mB + s.p2s + lambda) * std::sqrt(0.5) * t3; // L6p
    const BSMatrix b3 = bs_matrix(angles_from_transmittance(0.5, cfg.bs_phi[2], cfg.bs_psi[2]));
    const auto [l7, d] = apply_bs(b3, a_arm, b_arm);
    const cplx t9 = phasor(s.mF) * l7;
    const cplx l9 = -alpha * std::sqrt(1.0 / 3.0) * phasor(s.p1s - s.mC);
    const BSMatrix b4 =
        bs_matrix(angles_from_transmittance(1.0 / 3.0, cfg.bs_phi[3], cfg.bs_psi[3]));
    return b4.b21 * t9 + b4.b22 * l9;
}

std::vector<ModeExpectation> closed_form_modes(int setup, Setup2Mode mode,
                                               const NetworkConfig& cfg, cplx alpha,
                                               double t) {
    const Stage s(cfg, t);
    const double r13 = std::sqrt(1.0 / 3.0);
    const double r23 = std::sqrt(2.0 / 3.0);
    const double r12 = std::sqrt(0.5);

    std::vector<ModeExpectation> out;
    auto add = [&](std::string mode_label, std::string what, cplx v) {
        out.push_back({std::move(mode_label), std::move(what), v});
    };

    const cplx t8 = alpha * r13 * phasor(s.p1s);
    const cplx l2 = -alpha * r23 * phasor(-s.p1d);
    const cplx t3 = l2 * phasor(s.mE);
    const cplx t5 = r12 * phasor(s.p2s) * t3;
    const cplx l4 = -r12 * phasor(-s.p2d) * t3;
    const cplx t6 = phasor(s.mA) * l4;
    const cplx l6 = -phasor(-s.mB) * t5;
    const cplx l9 = -phasor(-s.mC) * t8;

    add("T8", "after BS1, outer arm toward mirror C", t8);
    add("L2", "after BS1, arm toward mirror E", l2);
    add("T3", "after mirror E", t3);
    add("T5", "after BS2, arm toward mirror B", t5);
    add("L4", "after BS2, arm toward mirror A", l4);
    add("T6", "after mirror A", t6);
    add("L6", "after mirror B", l6);
    add("L9", "after mirror C", l9);

    if (setup == 1) {
        const cplx l7 =
            alpha * r23 * phasor(-s.p1d + s.mE + 0.5 * (cfg.bs_psi[2] + cfg.bs_phi[1]) +
                                 0.5 * (s.mA - s.mB));
        add("d", "BS3 dark port", cplx{});
        add("L7", "BS3 bright port toward mirror F", l7);
        add("T9", "after mirror F", phasor(s.mF) * l7);
        add("g", "BS4 dark port", cplx{});
        add("h", "detector", closed_form_beta(1, mode, cfg, alpha, t));
        return out;
    }

    const double lambda = cfg.lambda ? *cfg.lambda : tuned_lambda(cfg, mode);
    add("L6p", "after the alignment phase shift", phasor(lambda) * l6);
    if (mode == Setup2Mode::PaperLiteral) {
        const cplx chi = t3 * phasor(0.5 * (cfg.bs_phi[1] - cfg.bs_psi[2]) +
                                     0.5 * (s.mA - s.mB) + 0.5 * (lambda - kPi));
        add("L7", "BS3 dark port toward mirror F", cplx{});
        add("d", "BS3 bright port", chi);
        add("T9", "after mirror F", cplx{});
        add("g", "BS4 outer port", -alpha * (std::sqrt(2.0) / 3.0) * phasor(s.p1s + s.p4d - s.mC));
        add("h", "detector", closed_form_beta(2, mode, cfg, alpha, t));
    }
    return out;
}

}  // namespace nmzi
