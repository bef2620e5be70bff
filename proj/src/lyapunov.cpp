#include "dicho/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dicho/errors.hpp"

namespace dicho {

namespace {

// Per-step factor for the requested exponent kind at index m (the factor
// applied when extending the product from length m to m+1).
Mat step_matrix(const BlockCocycle& bc, ExponentKind which, std::int64_t m) {
    switch (which) {
        case ExponentKind::Phi:
            return bc.stable_block(m);
        case ExponentKind::Psi:
            return bc.unstable_block(m);
        case ExponentKind::PhiBar:
            return Mat(bc.stable_block(m).transpose().inverse());
        case ExponentKind::PsiBar:
            return Mat(bc.unstable_block(m).transpose().inverse());
    }
    throw InvalidArgument("unknown exponent kind");
}

int block_dim(const BlockCocycle& bc, ExponentKind which) {
    return (which == ExponentKind::Phi || which == ExponentKind::PhiBar)
               ? bc.split()
               : bc.dim() - bc.split();
}

}  // namespace

ExponentEstimate exponent(const BlockCocycle& bc, const Vec& v, ExponentKind which,
                          const GrowthRate& rate, std::int64_t horizon) {
    if (horizon < 20) throw InvalidArgument("exponent estimation needs horizon >= 20");
    if (v.size() != block_dim(bc, which))
        throw InvalidArgument("vector dimension " + std::to_string(v.size()) +
                              " does not match the requested block (" +
                              std::to_string(block_dim(bc, which)) + ")");
    ExponentEstimate est;
    est.horizon = horizon;
    if (v.norm() == 0.0) {
        est.is_neg_infinity = true;
        est.value = -std::numeric_limits<double>::infinity();
        return est;
    }
    // Normalized product marching with log accumulation, anchored at index 0.
    Vec w = v / v.norm();
    double acc = std::log(v.norm());
    est.trace.reserve(std::size_t(horizon));
    for (std::int64_t m = 1; m <= horizon; ++m) {
        w = step_matrix(bc, which, m - 1) * w;
        const double n = w.norm();
        acc += std::log(n);
        w /= n;
        est.trace.push_back(acc / rate.log_at(m));
    }
    const std::size_t tail_start = std::size_t(horizon / 2) - 1;
    est.value = *std::max_element(est.trace.begin() + std::ptrdiff_t(tail_start), est.trace.end());
    return est;
}

namespace {

std::vector<ClusteredValue> cluster(std::vector<double> vals, double tol) {
    std::sort(vals.begin(), vals.end());
    std::vector<ClusteredValue> out;
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < vals.size() && vals[j] - vals[i] <= tol) sum += vals[j++];
        out.push_back({sum / double(j - i), int(j - i)});
        i = j;
    }
    return out;
}

// Column indices grouped cumulatively by ascending clustered value.
std::vector<std::vector<int>> filtration(const std::vector<double>& cols,
                                         const std::vector<ClusteredValue>& clusters, double tol) {
    std::vector<std::vector<int>> out;
    std::vector<int> acc;
    for (const auto& cl : clusters) {
        for (int j = 0; j < int(cols.size()); ++j)
            if (std::abs(cols[std::size_t(j)] - cl.value) <= tol + 1e-12 &&
                std::find(acc.begin(), acc.end(), j) == acc.end())
                acc.push_back(j);
        out.push_back(acc);
    }
    return out;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// min over seeded random dual bases of max_i (fwd(delta_i) + dual(dual_i)).
double random_dual_basis_search(const BlockCocycle& bc, ExponentKind fwd, ExponentKind dual,
                                const GrowthRate& fwd_rate, const GrowthRate& dual_rate,
                                std::int64_t horizon, int dim, std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Mat basis(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) basis(i, j) = unif(rng);
        if (min_singular_value(basis) < 1e-3) continue;
        Mat dual_basis = basis.inverse().transpose();
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < dim; ++i) {
            const double f = exponent(bc, basis.col(i), fwd, fwd_rate, horizon).value;
            const double g = exponent(bc, dual_basis.col(i), dual, dual_rate, horizon).value;
            worst = std::max(worst, f + g);
        }
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace

LyapunovSpectrum spectrum(const BlockCocycle& bc, const RateQuadrupleBars& rates,
                          std::int64_t horizon, double cluster_tol, std::uint64_t seed) {
    if (horizon < 20) throw InvalidArgument("spectrum needs horizon >= 20");
    if (!(cluster_tol > 0)) throw InvalidArgument("spectrum needs a positive cluster tolerance");
    const int l = bc.split();
    const int dd = bc.dim() - bc.split();

    LyapunovSpectrum sp;
    sp.cluster_tol = cluster_tol;
    sp.horizon = horizon;

    auto basis_col = [](int dim, int j) {
        Vec e = Vec::Zero(dim);
        e(j) = 1.0;
        return e;
    };
    for (int j = 0; j < l; ++j) {
        sp.stable_columns.push_back(
            exponent(bc, basis_col(l, j), ExponentKind::Phi, rates.h, horizon).value);
        sp.stable_dual_columns.push_back(
            exponent(bc, basis_col(l, j), ExponentKind::PhiBar, rates.hbar, horizon).value);
    }
    for (int j = 0; j < dd; ++j) {
        sp.unstable_columns.push_back(
            exponent(bc, basis_col(dd, j), ExponentKind::Psi, rates.k, horizon).value);
        sp.unstable_dual_columns.push_back(
            exponent(bc, basis_col(dd, j), ExponentKind::PsiBar, rates.kbar, horizon).value);
    }

    sp.stable_values = cluster(sp.stable_columns, cluster_tol);
    sp.unstable_values = cluster(sp.unstable_columns, cluster_tol);
    sp.stable_filtration = filtration(sp.stable_columns, sp.stable_values, cluster_tol);
    sp.unstable_filtration = filtration(sp.unstable_columns, sp.unstable_values, cluster_tol);

    if (all_finite(sp.stable_columns) && all_finite(sp.stable_dual_columns)) {
        double col = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < l; ++j)
            col = std::max(col, sp.stable_columns[std::size_t(j)] +
                                    sp.stable_dual_columns[std::size_t(j)]);
        const double rnd = random_dual_basis_search(bc, ExponentKind::Phi, ExponentKind::PhiBar,
                                                    rates.h, rates.hbar, horizon, l, seed, 50);
        sp.gamma = std::min(col, rnd);
        sp.gamma_provenance = rnd < col ? "random-dual-basis" : "column-formula";
    }
    if (all_finite(sp.unstable_columns) && all_finite(sp.unstable_dual_columns)) {
        double col = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < dd; ++j)
            col = std::max(col, sp.unstable_columns[std::size_t(j)] +
                                    sp.unstable_dual_columns[std::size_t(j)]);
        const double rnd = random_dual_basis_search(bc, ExponentKind::Psi, ExponentKind::PsiBar,
                                                    rates.k, rates.kbar, horizon, dd, seed + 1, 50);
        sp.gamma_bar = std::min(col, rnd);
        sp.gamma_bar_provenance = rnd < col ? "random-dual-basis" : "column-formula";
    }
    return sp;
}

DichotomyCertificate build_certificate(const BlockCocycle& bc, const LyapunovSpectrum& spec,
                                       const RateQuadrupleBars& rates, double eps_tilde,
                                       const Window& w) {
    if (!(eps_tilde > 0)) throw InvalidArgument("build_certificate needs eps_tilde > 0");
    if (spec.stable_values.empty() || spec.unstable_values.empty())
        throw InvalidArgument("build_certificate needs both blocks to carry exponents");
    const double lambda_r = spec.stable_values.back().value;
    const double chi_1 = spec.unstable_values.front().value;
    if (!(lambda_r < 0.0) || !(chi_1 > 0.0))
        throw InvalidArgument(
            "certificate construction is inapplicable: needs all stable exponents < 0 < all "
            "unstable exponents (got lambda_r=" +
            std::to_string(lambda_r) + ", chi_1=" + std::to_string(chi_1) + ")");
    if (!spec.gamma || !spec.gamma_bar)
        throw InvalidArgument("regularity coefficients unavailable; cannot assemble the factor eps");

    DichotomyCertificate cert;
    cert.a = lambda_r + eps_tilde;
    cert.b = chi_1 + eps_tilde;
    if (!(cert.a < 0))
        throw InvalidArgument("eps_tilde too large: lambda_r + eps_tilde must stay negative");
    cert.eps = std::max(0.0, std::max(*spec.gamma, *spec.gamma_bar) + eps_tilde);
    GrowthRate h = rates.h, hbar = rates.hbar, k = rates.k, kbar = rates.kbar;
    cert.h = h;
    cert.k = k;
    cert.mu = GrowthRate(h.label() + "*" + hbar.label(), h.domain(),
                         [h, hbar](std::int64_t m) { return h.log_at(m) + hbar.log_at(m); });
    cert.nu = GrowthRate(k.label() + "*" + kbar.label(), k.domain(),
                         [k, kbar](std::int64_t m) { return k.log_at(m) + kbar.log_at(m); });
    cert.projectors = ProjectorSequence::constant(bc.block_projector());

    // The proof's K is existential; fit the smallest windowed K for the
    // theorem's (a, b, eps).
    const Cocycle& c = bc.base();
    double log_K = -std::numeric_limits<double>::infinity();
    for (std::int64_t n = w.lo; n <= w.hi; ++n) {
        Mat f = cert.projectors.P(n);
        for (std::int64_t m = n; m <= w.hi; ++m) {
            if (m > n) f = c.matrix(m - 1) * f;
            const double norm = spectral_norm(f);
            if (norm > 0)
                log_K = std::max(log_K, std::log(norm) - cert.a * (h.log_at(m) - h.log_at(n)) -
                                            cert.eps * cert.mu.log_abs_at(n));
        }
        Mat g = cert.projectors.Q(n);
        for (std::int64_t m = n; m >= w.lo; --m) {
            if (m < n) g = c.inverse(m) * g;
            const double norm = spectral_norm(g);
            if (norm > 0)
                log_K = std::max(log_K, std::log(norm) + cert.b * (k.log_at(n) - k.log_at(m)) -
                                            cert.eps * cert.nu.log_abs_at(n));
        }
    }
    cert.K = std::exp(log_K);
    return cert;
}

}  // namespace dicho
