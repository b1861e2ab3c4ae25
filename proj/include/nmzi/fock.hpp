#pragma once

#include <vector>

#include "nmzi/optics.hpp"

// Truncated two-mode Fock space and the fully general beam-splitter output,
// used as a brute-force oracle for the coherent-amplitude shortcut.

namespace nmzi {

/// Thrown when a requested photon number exceeds the truncation cutoff.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a coherent expansion loses too much norm at the given cutoff.
struct TruncationError : std::runtime_error {
    double achieved_norm;
    TruncationError(const std::string& what, double norm)
        : std::runtime_error(what), achieved_norm(norm) {}
};

/// Two-mode state on photon numbers 0..cutoff per mode, coefficients indexed
/// by (n_top, n_left). Truncation can only lose norm, so norm() <= 1 + eps.
struct FockVector {
    int cutoff = 0;
    std::vector<cplx> coeffs;  // (cutoff+1)^2 entries, row = n_top

    explicit FockVector(int cutoff_)
        : cutoff(cutoff_), coeffs((cutoff_ + 1) * (size_t)(cutoff_ + 1)) {}

    cplx& at(int n_top, int n_left) { return coeffs[(size_t)n_top * (cutoff + 1) + n_left]; }
    cplx at(int n_top, int n_left) const { return coeffs[(size_t)n_top * (cutoff + 1) + n_left]; }

    double norm_sq() const;
    double norm() const;
};

cplx inner_product(const FockVector& a, const FockVector& b);

/// Output of a beam splitter on the Fock input |n>_T |m>_L, via the exact
/// double sum over (j, k) with binomial/factorial weights assembled in log
/// space. Throws CapacityError when n + m > cutoff.
FockVector fock_bs_output(int n, int m, const BSMatrix& b, int cutoff);

/// Single-mode coherent expansion e^{-|a|^2/2} sum_n a^n/sqrt(n!) |n>.
std::vector<cplx> coherent_coeffs(cplx alpha, int cutoff);

/// Coherent state embedded in the two-mode space as n_left = 0.
/// Throws TruncationError when the kept norm drops below 1 - 1e-10.
FockVector coherent_fock_expand(cplx alpha, int cutoff);

/// Default cutoff giving Poisson tail mass < 1e-10 for |alpha| <= 2.
int default_cutoff(double abs_alpha_top, double abs_alpha_left = 0.0);

/// |<psi_oracle | psi_shortcut>|^2 where the oracle applies the exact Fock
/// double sum term by term to the product coherent expansion and the
/// shortcut Fock-expands the linearly transformed amplitudes.
/// Joint photon numbers above the cutoff must carry < 1e-10 probability,
/// otherwise a TruncationError reports the achieved norm.
double oracle_compare(cplx alpha_top, cplx alpha_left, const BSMatrix& b, int cutoff);

}  // namespace nmzi
