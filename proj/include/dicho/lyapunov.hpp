#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicho/cocycle.hpp"
#include "dicho/dichotomy.hpp"
#include "dicho/growth.hpp"
#include "dicho/linalg.hpp"

namespace dicho {

/// Which generalized exponent to estimate on a block cocycle:
///   Phi     : forward products of the stable block C, normalized by log h_m
///   Psi     : forward products of the unstable block D, normalized by log k_m
///   PhiBar  : inverse-transpose products of C, normalized by log hbar_m
///   PsiBar  : inverse-transpose products of D, normalized by log kbar_m
enum class ExponentKind { Phi, Psi, PhiBar, PsiBar };

/// Windowed limsup estimate: the trace holds r_m = log||prod * v|| / log u_m
/// for m in [2, M]; the value is the max of the trace over [M/2, M].
/// Products are anchored at index 0 (u_0 = 1), so exactly-telescoping systems
/// give the exact exponent at any horizon.
struct ExponentEstimate {
    double value = 0.0;
    bool is_neg_infinity = false;  // only for the zero vector
    std::int64_t horizon = 0;
    std::vector<double> trace;
};

ExponentEstimate exponent(const BlockCocycle& bc, const Vec& v, ExponentKind which,
                          const GrowthRate& rate, std::int64_t horizon);

struct RateQuadrupleBars {
    GrowthRate h, k, hbar, kbar;
};

struct ClusteredValue {
    double value = 0.0;
    int multiplicity = 0;
};

struct LyapunovSpectrum {
    std::vector<ClusteredValue> stable_values;    // distinct phi column values, ascending
    std::vector<ClusteredValue> unstable_values;  // distinct psi column values, ascending
    std::vector<double> stable_columns;           // phi(e_j) per column j
    std::vector<double> stable_dual_columns;      // phi_bar of the dual columns
    std::vector<double> unstable_columns;
    std::vector<double> unstable_dual_columns;
    std::optional<double> gamma;      // regularity coefficient of (phi, phi_bar)
    std::optional<double> gamma_bar;  // of (psi, psi_bar)
    std::string gamma_provenance;     // "column-formula" or "random-dual-basis"
    std::string gamma_bar_provenance;
    double cluster_tol = 0.05;
    std::int64_t horizon = 0;
    // Filtration: stable basis column indices grouped by ascending exponent.
    std::vector<std::vector<int>> stable_filtration;
    std::vector<std::vector<int>> unstable_filtration;
};

/// Column exponents of the forward and inverse-transpose products, clustered
/// within cluster_tol; gamma from the column pairing max_j (m^_j + n^_j),
/// possibly improved by a seeded random dual-basis search (50 trials).
LyapunovSpectrum spectrum(const BlockCocycle& bc, const RateQuadrupleBars& rates,
                          std::int64_t horizon, double cluster_tol = 0.05,
                          std::uint64_t seed = 12345);

/// Certificate from a computed spectrum: a = lambda_r + eps_tilde,
/// b = chi_1 + eps_tilde, eps = max(gamma, gamma_bar) + eps_tilde,
/// mu = h*hbar, nu = k*kbar, block projectors, K fitted on the window.
/// Requires lambda_r < 0 < chi_1 and finite regularity coefficients.
DichotomyCertificate build_certificate(const BlockCocycle& bc, const LyapunovSpectrum& spec,
                                       const RateQuadrupleBars& rates, double eps_tilde,
                                       const Window& w);

}  // namespace dicho
