#include "dicho/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dicho/errors.hpp"

namespace dicho {

void ProjectorSequence::check_idempotent(const Window& w, double tol) const {
    for (std::int64_t m = w.lo; m <= w.hi; ++m) {
        Mat p = P(m);
        const double defect = spectral_norm(Mat(p * p - p));
        if (!(defect <= tol))
            throw InvalidArgument("projector P_" + std::to_string(m) +
                                  " fails idempotence: defect " + std::to_string(defect));
    }
}

void DichotomyCertificate::check_constants() const {
    if (!(K > 0)) throw InvalidArgument("certificate needs K > 0");
    if (!(a < 0)) throw InvalidArgument("certificate needs a < 0");
    if (!(b >= 0)) throw InvalidArgument("certificate needs b >= 0");
    if (!(eps >= 0)) throw InvalidArgument("certificate needs eps >= 0");
}

double DichotomyCertificate::log_rhs_stable(std::int64_t m, std::int64_t n) const {
    return std::log(K) + a * (h.log_at(m) - h.log_at(n)) + eps * mu.log_abs_at(n);
}

double DichotomyCertificate::log_rhs_unstable(std::int64_t m, std::int64_t n) const {
    return std::log(K) - b * (k.log_at(n) - k.log_at(m)) + eps * nu.log_abs_at(n);
}

namespace {

void check_commutation(const Cocycle& c, const ProjectorSequence& pr, const Window& w,
                       double rel_tol = 1e-9) {
    // March the full evolution from each base n and compare P_m A(m,n) with
    // A(m,n) P_n as we go.
    const int d = c.dim();
    for (std::int64_t n = w.lo; n <= w.hi; ++n) {
        Mat pn = pr.P(n);
        Mat e = Mat::Identity(d, d);
        for (std::int64_t m = n; m <= w.hi; ++m) {
            if (m > n) e = c.matrix(m - 1) * e;
            const double defect = spectral_norm(Mat(pr.P(m) * e - e * pn));
            const double scale = std::max(spectral_norm(e), 1e-300);
            if (!(defect <= rel_tol * scale))
                throw InvalidArgument("projectors do not commute with the cocycle at (m,n)=(" +
                                      std::to_string(m) + "," + std::to_string(n) + "), defect " +
                                      std::to_string(defect / scale));
        }
    }
}

}  // namespace

VerifyReport verify(const Cocycle& c, const DichotomyCertificate& cert, const Window& w,
                    double slack_tol, bool keep_rows) {
    cert.check_constants();
    if (w.lo > w.hi) throw InvalidArgument("verify: empty window");
    cert.projectors.check_idempotent(w);
    check_commutation(c, cert.projectors, w);

    VerifyReport rep;
    rep.window = w;
    rep.slack_tol = slack_tol;
    auto consider = [&](std::int64_t m, std::int64_t n, char side, double lhs, double log_rhs) {
        const double rhs = std::exp(log_rhs);
        const double slack = lhs / rhs;
        if (slack > rep.worst_slack) {
            rep.worst_slack = slack;
            rep.worst_pair = {m, n};
        }
        if (side == 'P')
            rep.worst_stable_slack = std::max(rep.worst_stable_slack, slack);
        else
            rep.worst_unstable_slack = std::max(rep.worst_unstable_slack, slack);
        if (keep_rows) rep.rows.push_back({m, n, side, lhs, rhs});
    };

    for (std::int64_t n = w.lo; n <= w.hi; ++n) {
        // Stable side: F = A(m,n) P_n marched forward.
        Mat f = cert.projectors.P(n);
        consider(n, n, 'P', spectral_norm(f), cert.log_rhs_stable(n, n));
        for (std::int64_t m = n + 1; m <= w.hi; ++m) {
            f = c.matrix(m - 1) * f;
            consider(m, n, 'P', spectral_norm(f), cert.log_rhs_stable(m, n));
        }
        // Unstable side: G = A(m,n) Q_n marched backward.
        Mat g = cert.projectors.Q(n);
        consider(n, n, 'Q', spectral_norm(g), cert.log_rhs_unstable(n, n));
        for (std::int64_t m = n - 1; m >= w.lo; --m) {
            g = c.inverse(m) * g;
            consider(m, n, 'Q', spectral_norm(g), cert.log_rhs_unstable(m, n));
        }
    }
    rep.holds = rep.worst_slack <= 1.0 + slack_tol;
    return rep;
}

double equivalent_form_worst_slack(const Cocycle& c, const DichotomyCertificate& cert,
                                   const Window& w) {
    // ||A(m,n)^{-1} Q_m|| = ||A(n,m) Q_m|| for m >= n: the unstable scan
    // re-indexed; RHS uses nu at the upper index m.
    double worst = 0.0;
    for (std::int64_t m = w.lo; m <= w.hi; ++m) {
        Mat g = cert.projectors.Q(m);
        for (std::int64_t n = m; n >= w.lo; --n) {
            if (n < m) g = c.inverse(n) * g;
            const double lhs = spectral_norm(g);
            const double log_rhs = std::log(cert.K) - cert.b * (cert.k.log_at(m) - cert.k.log_at(n)) +
                                   cert.eps * cert.nu.log_abs_at(m);
            worst = std::max(worst, lhs / std::exp(log_rhs));
        }
    }
    return worst;
}

namespace {

struct PairTerm {
    double log_lhs;
    double rate_gap;   // log h_m - log h_n (stable) or log k_n - log k_m (unstable)
    double log_factor; // log mu_{|n|} or log nu_{|n|}
};

// log K needed on the stable side for given (a, eps): max over terms.
double log_K_stable(const std::vector<PairTerm>& ts, double a, double eps) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : ts) best = std::max(best, t.log_lhs - a * t.rate_gap - eps * t.log_factor);
    return best;
}

double log_K_unstable(const std::vector<PairTerm>& ts, double b, double eps) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : ts) best = std::max(best, t.log_lhs + b * t.rate_gap - eps * t.log_factor);
    return best;
}

// Leftmost x in [lo, hi] with pred(x) true, for a predicate that is false
// then true as x increases. Assumes pred(hi) is true.
double bisect_leftmost(double lo, double hi, const std::function<bool(double)>& pred) {
    if (pred(lo)) return lo;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

// Rightmost x in [lo, hi] with pred(x) true, for a predicate that is true
// then false as x increases. Assumes pred(lo) is true.
double bisect_rightmost(double lo, double hi, const std::function<bool(double)>& pred) {
    if (pred(hi)) return hi;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

FitReport fit_constants(const Cocycle& c, const ProjectorSequence& projectors,
                        const GrowthRate& h, const GrowthRate& k, const GrowthRate& mu,
                        const GrowthRate& nu, const Window& w, const FitOptions& opts) {
    if (w.lo > w.hi) throw InvalidArgument("fit_constants: empty window");
    projectors.check_idempotent(w);
    check_commutation(c, projectors, w);

    std::vector<PairTerm> sp, up;
    sp.reserve(std::size_t(w.length()) * std::size_t(w.length()) / 2);
    up.reserve(sp.capacity());
    for (std::int64_t n = w.lo; n <= w.hi; ++n) {
        Mat f = projectors.P(n);
        for (std::int64_t m = n; m <= w.hi; ++m) {
            if (m > n) f = c.matrix(m - 1) * f;
            const double norm = spectral_norm(f);
            if (norm > 0)
                sp.push_back({std::log(norm), h.log_at(m) - h.log_at(n), mu.log_abs_at(n)});
        }
        Mat g = projectors.P(n);
        g = Mat::Identity(g.rows(), g.cols()) - g;
        for (std::int64_t m = n; m >= w.lo; --m) {
            if (m < n) g = c.inverse(m) * g;
            const double norm = spectral_norm(g);
            if (norm > 0)
                up.push_back({std::log(norm), k.log_at(n) - k.log_at(m), nu.log_abs_at(n)});
        }
    }

    FitReport rep;
    rep.options = opts;
    rep.window = w;

    // Best achievable log K at a given eps (limits a -> 0-, b -> 0+).
    auto log_K_min = [&](double eps) {
        return std::max(log_K_stable(sp, 0.0, eps), log_K_unstable(up, 0.0, eps));
    };

    const double log_plateau = std::log1p(opts.rtol);
    const double global_min = log_K_min(opts.eps_hi);
    if (!(global_min <= std::log(opts.K_cap))) {
        rep.feasible = false;
        rep.fitted_K = std::exp(global_min);
        rep.note = "no certificate with a < 0 <= b attains K <= K_cap on this window";
        return rep;
    }

    // Smallest eps on the min-K plateau. Coarse grid scan brackets the edge,
    // then bisection finds it.
    const double target0 = global_min + log_plateau;
    double eps_bracket_lo = 0.0, eps_bracket_hi = opts.eps_hi;
    for (double e = 0.0; e <= opts.eps_hi + 1e-12; e += opts.grid_step) {
        if (log_K_min(e) <= target0) {
            eps_bracket_hi = e;
            break;
        }
        eps_bracket_lo = e;
    }
    const double eps_star = bisect_leftmost(eps_bracket_lo, eps_bracket_hi,
                                            [&](double e) { return log_K_min(e) <= target0; });
    const double log_K_star = log_K_min(eps_star);
    const double target = log_K_star + log_plateau;

    // Strongest rates on the K plateau at eps_star.
    double a_star = bisect_leftmost(opts.a_lo, 0.0, [&](double a) {
        return log_K_stable(sp, a, eps_star) <= target;
    });
    a_star = std::min(a_star, -1e-12);
    const double b_star = bisect_rightmost(0.0, opts.b_hi, [&](double b) {
        return log_K_unstable(up, b, eps_star) <= target;
    });

    DichotomyCertificate cert;
    cert.a = a_star;
    cert.b = b_star;
    cert.eps = eps_star;
    cert.h = h;
    cert.k = k;
    cert.mu = mu;
    cert.nu = nu;
    cert.projectors = projectors;
    cert.K = std::exp(std::max(log_K_stable(sp, a_star, eps_star),
                               log_K_unstable(up, b_star, eps_star)));
    rep.certificate = cert;
    rep.fitted_K = cert.K;
    rep.feasible = cert.K <= opts.K_cap;
    if (!rep.feasible) rep.note = "fitted K exceeds K_cap";
    return rep;
}

RateQuadruple specialize(DichotomyKind kind, std::optional<GrowthRate> first,
                         std::optional<GrowthRate> second, const std::vector<double>& rho_coeffs) {
    auto expm = [] { return make_standard_rate(RateFamily::Exponential, {1.0}); };
    RateQuadruple q;
    switch (kind) {
        case DichotomyKind::UniformExponential:
            q.h = q.k = expm();
            q.mu = q.nu = GrowthRate::unit();
            q.eps_forced_zero = true;
            return q;
        case DichotomyKind::HH: {
            GrowthRate base = first ? *first : expm();
            q.h = q.k = base;
            q.mu = q.nu = GrowthRate::unit();
            q.eps_forced_zero = true;
            return q;
        }
        case DichotomyKind::HK: {
            q.h = first ? *first : expm();
            q.k = second ? *second : expm();
            q.mu = q.nu = GrowthRate::unit();
            q.eps_forced_zero = true;
            return q;
        }
        case DichotomyKind::NonuniformExponential:
            q.h = q.k = expm();
            q.mu = q.nu = expm();  // evaluated at |m| by the certificate
            return q;
        case DichotomyKind::NonuniformPolynomial: {
            GrowthRate poly = make_standard_rate(RateFamily::Polynomial, {1.0}, Domain::HalfLine);
            q.h = q.k = q.mu = q.nu = poly;
            return q;
        }
        case DichotomyKind::MuNu: {
            if (!first || !second)
                throw InvalidArgument("mu-nu specialization needs the two rates");
            q.h = q.mu = *first;
            q.k = q.nu = *second;
            return q;
        }
        case DichotomyKind::RhoExponential: {
            if (rho_coeffs.empty())
                throw InvalidArgument("rho-exponential specialization needs rho coefficients");
            GrowthRate r =
                make_standard_rate(RateFamily::ExpPolylog, rho_coeffs, Domain::HalfLine);
            q.h = q.k = q.mu = q.nu = r;
            return q;
        }
    }
    throw InvalidArgument("unknown dichotomy kind");
}

}  // namespace dicho
