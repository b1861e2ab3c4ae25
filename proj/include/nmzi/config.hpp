#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nmzi/spectrum.hpp"

// Run description for the command-line front end: which setup, the input
// amplitude or ensemble, sampling parameters and the seed. Parsed from a
// flat key = value text file with a [mirrors] table section; every field
// has a default so a bare run works with no file at all.

namespace nmzi {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    int setup = 1;
    Setup2Mode setup2_mode = Setup2Mode::PaperLiteral;
    cplx alpha{1.0, 0.0};
    NetworkConfig network = NetworkConfig::defaults();
    double rate = 1024.0;      // samples per second
    double duration = 1024.0;  // seconds
    std::uint64_t seed = 1;
    EnsembleSpec ensemble;     // defaults to the point distribution at alpha
    int draws = 1000;          // ensemble draws (thermal only)
    double threshold_db = kPeakThresholdDb;

    void validate() const;  // throws ConfigError
    Network build_network() const;
};

/// Parse a complex number: "1.5", "2i", "1+2i", "1-2i" or "(re,im)".
cplx parse_complex(const std::string& text);

/// Parse the key = value / [mirrors] format. Unknown keys are errors.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// The config text that reproduces the built-in defaults, with comments
/// documenting every key. `nmzi simulate --dump-config` prints this.
std::string default_config_text();

}  // namespace nmzi
