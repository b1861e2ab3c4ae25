#pragma once

#include <iosfwd>
#include <string>

#include "nmzi/config.hpp"

// Orchestration behind the command-line subcommands. Each runner returns
// the process exit code: 0 success, 2 config error, 3 conformance failure,
// 4 oracle failure. Config errors are thrown as ConfigError and mapped to
// exit code 2 by the caller.

namespace nmzi {

/// Simulate the detector spectrum and write spectrum.csv, peaks.json and
/// summary.txt into out_dir (created if missing). Deterministic for a
/// fixed config and seed.
int run_simulate(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Compare graph propagation against the per-mode closed forms at n_times
/// pseudo-random times (seeded), and the phase-relation residual at zero
/// modulation. Reports the first mismatched mode label on failure.
int run_conformance(const RunConfig& cfg, int n_times, std::ostream& log);

/// Check every network element against the brute-force Fock-basis output,
/// fed with the amplitudes the element actually sees at t = 0.
int run_oracle(const RunConfig& cfg, int cutoff, std::ostream& log);

/// Print the first-order analytic line list as CSV (freq_hz, power).
int run_lines(const RunConfig& cfg, std::ostream& out);

}  // namespace nmzi
