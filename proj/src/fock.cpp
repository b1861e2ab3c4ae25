#include "nmzi/fock.hpp"

#include <cmath>

namespace nmzi {

namespace {

std::vector<cplx> int_powers(cplx z, int max_exp) {
    std::vector<cplx> p(max_exp + 1);
    p[0] = 1.0;
    for (int i = 1; i <= max_exp; ++i) p[i] = p[i - 1] * z;
    return p;
}

}  // namespace

double FockVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& c : coeffs) s += std::norm(c);
    return s;
}

double FockVector::norm() const { return std::sqrt(norm_sq()); }

cplx inner_product(const FockVector& a, const FockVector& b) {
    if (a.cutoff != b.cutoff) throw std::invalid_argument("inner_product: cutoff mismatch");
    cplx s = 0.0;
    for (size_t i = 0; i < a.coeffs.size(); ++i) s += std::conj(a.coeffs[i]) * b.coeffs[i];
    return s;
}

FockVector fock_bs_output(int n, int m, const BSMatrix& b, int cutoff) {
    if (n < 0 || m < 0) throw std::invalid_argument("fock_bs_output: negative photon count");
    if (n + m > cutoff)
        throw CapacityError("fock_bs_output: n + m exceeds the supported cutoff");

    FockVector out(cutoff);
    const auto p11 = int_powers(b.b11, n);
    const auto p21 = int_powers(b.b21, n);
    const auto p12 = int_powers(b.b12, m);
    const auto p22 = int_powers(b.b22, m);

    const double lg_nm = std::lgamma(n + 1.0) + std::lgamma(m + 1.0);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= m; ++k) {
            const int p = n - j + m - k;  // output top photons
            const int q = j + k;          // output left photons
            // (n!m!)^{-1/2} C(n,j) C(m,k) sqrt(p! q!)
            double lw = 0.5 * (std::lgamma(p + 1.0) + std::lgamma(q + 1.0)) - 0.5 * lg_nm;
            lw += std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
            lw += std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
            out.at(p, q) += std::exp(lw) * p11[n - j] * p21[j] * p12[m - k] * p22[k];
        }
    }
    return out;
}

std::vector<cplx> coherent_coeffs(cplx alpha, int cutoff) {
    std::vector<cplx> c(cutoff + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int k = 1; k <= cutoff; ++k) c[k] = c[k - 1] * alpha / std::sqrt((double)k);
    return c;
}

FockVector coherent_fock_expand(cplx alpha, int cutoff) {
    FockVector v(cutoff);
    const auto c = coherent_coeffs(alpha, cutoff);
    double kept = 0.0;
    for (int k = 0; k <= cutoff; ++k) {
        v.at(k, 0) = c[k];
        kept += std::norm(c[k]);
    }
    if (kept < 1.0 - 1e-10)
        throw TruncationError("coherent_fock_expand: cutoff too small for amplitude", std::sqrt(kept));
    return v;
}

int default_cutoff(double abs_alpha_top, double abs_alpha_left) {
    const double a = abs_alpha_top, b = abs_alpha_left;
    return (int)std::ceil(a * a + b * b + 6.0 * (a + b) + 10.0);
}

double oracle_compare(cplx alpha_top, cplx alpha_left, const BSMatrix& b, int cutoff) {
    const auto ct = coherent_coeffs(alpha_top, cutoff);
    const auto cl = coherent_coeffs(alpha_left, cutoff);

    // Joint weight kept inside the n + m <= cutoff wedge.
    double kept = 0.0;
    for (int n = 0; n <= cutoff; ++n)
        for (int m = 0; m + n <= cutoff; ++m) kept += std::norm(ct[n]) * std::norm(cl[m]);
    if (kept < 1.0 - 1e-10)
        throw TruncationError("oracle_compare: joint photon number exceeds cutoff too often",
                              std::sqrt(kept));

    FockVector oracle(cutoff);
    for (int n = 0; n <= cutoff; ++n) {
        for (int m = 0; m + n <= cutoff; ++m) {
            const cplx w = ct[n] * cl[m];
            if (std::abs(w) < 1e-18) continue;
            const FockVector term = fock_bs_output(n, m, b, cutoff);
            for (size_t i = 0; i < oracle.coeffs.size(); ++i)
                oracle.coeffs[i] += w * term.coeffs[i];
        }
    }

    const auto [out_top, out_left] = apply_bs(b, alpha_top, alpha_left);
    const auto st = coherent_coeffs(out_top, cutoff);
    const auto sl = coherent_coeffs(out_left, cutoff);
    FockVector shortcut(cutoff);
    for (int n = 0; n <= cutoff; ++n)
        for (int m = 0; m <= cutoff; ++m) shortcut.at(n, m) = st[n] * sl[m];

    return std::norm(inner_product(oracle, shortcut));
}

}  // namespace nmzi
