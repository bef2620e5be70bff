#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dicho {

/// Index domain of a sequence: all integers, or nonnegative integers only.
enum class Domain { FullLine, HalfLine };

enum class RateFamily { Exponential, Polynomial, ExpPolylog, Custom };

/// A growth rate: a strictly increasing positive sequence u_m with u_0 = 1,
/// u_m -> +inf as m -> +inf, and (on the full line) u_m -> 0 as m -> -inf.
///
/// Stored as a log-evaluator so super-exponential rates stay representable;
/// consumers that need ratios u_m/u_n raised to powers should work with
/// log_at() differences and exponentiate at the end.
class GrowthRate {
public:
    GrowthRate() = default;
    GrowthRate(std::string label, Domain domain, std::function<double(std::int64_t)> log_eval)
        : label_(std::move(label)), domain_(domain), log_eval_(std::move(log_eval)) {}

    /// u_m
    double operator()(std::int64_t m) const { return std::exp(log_eval_(m)); }
    /// log u_m
    double log_at(std::int64_t m) const { return log_eval_(m); }
    /// u_{|m|}: the rate evaluated at the absolute index, as used by the
    /// nonuniform factors mu_{|n|}, nu_{|n|}.
    double abs_at(std::int64_t m) const { return std::exp(log_eval_(std::llabs(m))); }
    double log_abs_at(std::int64_t m) const { return log_eval_(std::llabs(m)); }

    Domain domain() const { return domain_; }
    const std::string& label() const { return label_; }

    /// Check the growth-rate axioms on [lo, hi]: u_0 = 1 exactly, strict
    /// monotonicity, and (full line) u_{lo} small / u_{hi} large for a
    /// window-dependent threshold. Throws InvalidArgument on violation.
    void validate(std::int64_t lo, std::int64_t hi) const;

    /// The degenerate constant-1 sequence. Not a growth rate (it is not
    /// increasing); accepted where a uniform dichotomy makes the nonuniform
    /// factor irrelevant (eps = 0).
    static GrowthRate unit();

private:
    std::string label_;
    Domain domain_ = Domain::FullLine;
    std::function<double(std::int64_t)> log_eval_;
};

/// make_standard_rate: named families.
///   Exponential: u_m = e^{c m},             params {c}, c > 0, full line
///   Polynomial:  u_m = (m+1)^p,             params {p}, p > 0, half line
///   ExpPolylog:  u_m = e^{sum_i c_i m^i},   params {c_1, c_2, ...}, full line
///   Custom:      caller supplies log-evaluator via the overload below.
GrowthRate make_standard_rate(RateFamily family, const std::vector<double>& params,
                              Domain domain = Domain::FullLine);
GrowthRate make_standard_rate(std::string label, Domain domain,
                              std::function<double(std::int64_t)> log_eval,
                              std::int64_t check_lo = -20, std::int64_t check_hi = 20);

/// Windowed density certificate for the interval-count classes: any interval
/// of length l1 contains at most omega1 points of {1/u_m}, any interval of
/// length l2 at most omega2 points of {u_m} (both checked on a window).
struct DensityCertificate {
    double l1 = 1.0;
    int omega1 = 1;
    double l2 = 1.0;
    int omega2 = 1;
};

enum class DensityClass { ReciprocalPoints, DirectPoints };  // {1/u_m} vs {u_m}

/// Max number of sample points of {1/u_m} or {u_m}, for m in [lo, hi], that
/// fit in a half-open interval [x, x + interval_length).
int check_density(const GrowthRate& u, DensityClass which, double interval_length,
                  std::int64_t lo, std::int64_t hi);

/// Truncated value of zeta_l = sum_{t>=1} t^l for l < -1, with a guaranteed
/// remainder bracket from the integral test.
struct ZetaValue {
    double exponent = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;  // |value - true zeta| <= tail_bound
};

ZetaValue zeta(double exponent, double tol);

/// sum_{tau=floor}^{m-1} (u_m / u_tau)^exponent with exponent < 0.
/// Terms are added from tau = m-1 downward; `converged` reports whether the
/// last 10 summands each fell below 1e-14 of the running sum.
struct TailSum {
    double value = 0.0;
    bool converged = false;
};

TailSum tail_sum_backward(const GrowthRate& u, std::int64_t m, double exponent,
                          std::int64_t window_floor);

}  // namespace dicho
