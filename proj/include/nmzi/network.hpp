#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmzi/optics.hpp"

// The nested two-interferometer topology: an inner loop (BS2-BS3 with
// mirrors A, B) embedded in one arm of an outer loop (BS1-BS4 with mirrors
// C, E, F). Coherent amplitudes are propagated at a frozen time t; mirror
// motion is millihertz-slow compared to light transit, so every element
// sees the same t.

namespace nmzi {

enum class Setup2Mode { PaperLiteral, Physical };

struct NetworkConfig {
    // Mirror order: A, B, C, E, F.
    std::array<MirrorSpec, 5> mirrors{};
    // Constant Euler angles of BS1..BS4 (index 0..3).
    std::array<double, 4> bs_phi{};
    std::array<double, 4> bs_psi{};
    // Alignment phase on the arm between mirror B and BS3 (setup 2 only).
    // Unset means "tuned": chosen so the port toward mirror F is dark at
    // zero modulation.
    std::optional<double> lambda;

    static NetworkConfig defaults();

    const MirrorSpec& mirror(char label) const;
    MirrorSpec& mirror(char label);
    double max_mirror_freq() const;
    double min_freq_gap() const;
    void validate() const;
};

struct Element {
    enum class Kind { BeamSplitter, Mirror, PhaseShift };
    Kind kind = Kind::BeamSplitter;
    std::string id;
    EulerAngles angles;       // BeamSplitter
    char mirror_label = '?';  // Mirror
    double phase = 0.0;       // PhaseShift, applied on the left port
    std::string in_top, in_left, out_top, out_left;
    // When >= 0, this element recombines two arms and the indicated output
    // (0 = top, 1 = left) is taken exactly dark: the bright output carries
    // all input power with the phase averaged between the two single-arm
    // inferences. This reproduces the ideal-interference closed forms.
    int dark_port = -1;
};

struct ModeAmplitudes {
    double time = 0.0;
    std::map<std::string, cplx> amps;
    cplx at(const std::string& mode) const;
    double terminal_power() const;
};

class Network {
  public:
    static Network setup1(const NetworkConfig& cfg);
    static Network setup2(const NetworkConfig& cfg, Setup2Mode mode);

    ModeAmplitudes propagate(cplx alpha_in, double t) const;
    /// Detector-mode amplitude only (same math as propagate, no map).
    cplx detector(cplx alpha_in, double t) const;

    int setup() const { return setup_; }
    Setup2Mode mode() const { return mode_; }
    double lambda() const { return lambda_; }
    const NetworkConfig& config() const { return cfg_; }
    const std::vector<Element>& elements() const { return elements_; }
    static const std::vector<std::string>& terminal_modes();

    /// Test hook: swap the two input ports of one element.
    void corrupt_swap_inputs(const std::string& element_id);

  private:
    Network(int setup, Setup2Mode mode, NetworkConfig cfg);
    void build();
    void compile();
    void propagate_into(std::vector<cplx>& amps, cplx alpha_in, double t) const;

    int setup_ = 1;
    Setup2Mode mode_ = Setup2Mode::PaperLiteral;
    NetworkConfig cfg_;
    double lambda_ = kPi;
    std::vector<Element> elements_;
    // compiled index plan
    std::map<std::string, int> mode_index_;
    struct Step {
        int kind;  // 0 bs, 1 mirror, 2 phase
        int elem;
        int in_top = -1, in_left = -1, out_top = -1, out_left = -1;
        int dark_port = -1;
        BSMatrix constant;   // beam splitter matrix (time independent)
        int mirror_idx = -1; // index into cfg_.mirrors
        cplx phase_factor{1.0, 0.0};
    };
    std::vector<Step> steps_;
    int src_index_ = -1, det_index_ = -1;
};

/// Lambda that makes the BS3 port toward mirror F dark at zero modulation.
double tuned_lambda(const NetworkConfig& cfg, Setup2Mode mode);

/// Residual of the setup-2 phase relation
///   (psi2 + psi3) - [ (Psi_A + Psi_B - Phi_A - Phi_B)/2 - pi + lambda ],
/// wrapped to (-pi, pi]. Zero residual means the arm toward mirror F
/// interferes away exactly.
double verify_phase_relation(const NetworkConfig& cfg, double lambda, double t);

/// Detector amplitude from the closed-form product of per-element phase
/// factors, independent of the graph composition above.
cplx closed_form_beta(int setup, Setup2Mode mode, const NetworkConfig& cfg, cplx alpha,
                      double t);

struct ModeExpectation {
    std::string mode;   // mode label the value applies to
    std::string label;  // human-readable anchor, e.g. "after BS1 (top arm)"
    cplx value;
};

/// Expected amplitude of every intermediate and terminal mode, evaluated
/// from the per-stage closed forms (one formula per mode, no matrix
/// composition). For setup-2 Physical mode only the single-element stages
/// are closed-form; the recombined modes are omitted.
std::vector<ModeExpectation> closed_form_modes(int setup, Setup2Mode mode,
                                               const NetworkConfig& cfg, cplx alpha,
                                               double t);

}  // namespace nmzi
