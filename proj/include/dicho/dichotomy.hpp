#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dicho/cocycle.hpp"
#include "dicho/growth.hpp"
#include "dicho/linalg.hpp"

namespace dicho {

/// Inclusive index window [lo, hi].
struct Window {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t length() const { return hi - lo + 1; }
};

/// A sequence of projections P_m (complement Q_m = I - P_m).
class ProjectorSequence {
public:
    ProjectorSequence() = default;
    explicit ProjectorSequence(std::function<Mat(std::int64_t)> p) : p_(std::move(p)) {}

    Mat P(std::int64_t m) const { return p_(m); }
    Mat Q(std::int64_t m) const {
        Mat p = p_(m);
        return Mat::Identity(p.rows(), p.cols()) - p;
    }
    bool valid() const { return bool(p_); }

    /// Idempotence ||P_m^2 - P_m|| <= tol on the window; throws otherwise.
    void check_idempotent(const Window& w, double tol = 1e-10) const;

    static ProjectorSequence constant(const Mat& p) {
        return ProjectorSequence([p](std::int64_t) { return p; });
    }

private:
    std::function<Mat(std::int64_t)> p_;
};

/// The verifiable witness of a nonuniform (h,k,mu,nu)-dichotomy:
///   ||A(m,n) P_n|| <= K (h_m/h_n)^a mu_{|n|}^eps   for m >= n,
///   ||A(m,n) Q_n|| <= K (k_n/k_m)^{-b} nu_{|n|}^eps for m <= n,
/// with a < 0 <= b, eps >= 0, K > 0.
struct DichotomyCertificate {
    double K = 1.0;
    double a = -1.0;
    double b = 1.0;
    double eps = 0.0;
    GrowthRate h, k, mu, nu;
    ProjectorSequence projectors;

    void check_constants() const;  // throws InvalidArgument if a<0<=b etc. fail

    double log_rhs_stable(std::int64_t m, std::int64_t n) const;    // log of K(h_m/h_n)^a mu^eps
    double log_rhs_unstable(std::int64_t m, std::int64_t n) const;  // log of K(k_n/k_m)^-b nu^eps
};

struct VerifyReport {
    bool holds = false;
    double worst_slack = 0.0;  // max over pairs of LHS/RHS
    std::pair<std::int64_t, std::int64_t> worst_pair{0, 0};
    double worst_stable_slack = 0.0;
    double worst_unstable_slack = 0.0;
    Window window;
    double slack_tol = 1e-9;  // holds iff worst_slack <= 1 + slack_tol
    // Per-pair scan rows (m, n, side 'P'/'Q', lhs, rhs) for CSV emission.
    struct Row {
        std::int64_t m, n;
        char side;
        double lhs, rhs;
    };
    std::vector<Row> rows;
};

/// Scan both dichotomy inequalities over all ordered pairs in the window.
/// The stable side marches the projected matrix A(m,n)P_n forward index by
/// index (and the unstable side backward), which avoids forming the full
/// evolution operator and keeps the decaying part accurate.
/// Projector idempotence and commutation with the cocycle are checked first.
VerifyReport verify(const Cocycle& c, const DichotomyCertificate& cert, const Window& w,
                    double slack_tol = 1e-9, bool keep_rows = false);

/// Worst slack of the equivalent backward form
///   ||A(m,n)^{-1} Q_m|| <= K (k_m/k_n)^{-b} nu_{|m|}^eps,  m >= n.
double equivalent_form_worst_slack(const Cocycle& c, const DichotomyCertificate& cert,
                                   const Window& w);

struct FitOptions {
    double a_lo = -6.0, b_hi = 6.0, eps_hi = 3.0;
    double grid_step = 0.05;
    double rtol = 1e-9;     // plateau tolerance for the tie-breaks
    double K_cap = 1e8;     // fits above this K are reported infeasible
};

struct FitReport {
    bool feasible = false;
    DichotomyCertificate certificate;
    double fitted_K = 0.0;
    FitOptions options;
    Window window;
    std::string note;
};

/// Fit the best certificate on a window: the smallest K subject to both
/// inequalities, with ties broken toward the smallest eps, then the
/// strongest rates (most negative a, largest b). log K is monotone in each
/// of (a, b, eps) separately, so each stage reduces to a bisection for the
/// edge of a plateau after a coarse grid scan.
FitReport fit_constants(const Cocycle& c, const ProjectorSequence& projectors,
                        const GrowthRate& h, const GrowthRate& k, const GrowthRate& mu,
                        const GrowthRate& nu, const Window& w, const FitOptions& opts = {});

/// Named dichotomy specializations: rate bindings plus the eps constraint.
enum class DichotomyKind {
    UniformExponential,
    HH,
    HK,
    NonuniformExponential,
    NonuniformPolynomial,
    MuNu,
    RhoExponential,
};

struct RateQuadruple {
    GrowthRate h, k, mu, nu;
    bool eps_forced_zero = false;
};

/// For parameterized kinds: HH/HK take base rates via `first`/`second`;
/// MuNu takes (mu, nu); RhoExponential takes rho's polynomial coefficients.
RateQuadruple specialize(DichotomyKind kind, std::optional<GrowthRate> first = std::nullopt,
                         std::optional<GrowthRate> second = std::nullopt,
                         const std::vector<double>& rho_coeffs = {});

}  // namespace dicho
