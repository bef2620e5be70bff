#include "dicho/growth.hpp"

#include <algorithm>
#include <cmath>

#include "dicho/errors.hpp"

namespace dicho {

void GrowthRate::validate(std::int64_t lo, std::int64_t hi) const {
    if (domain_ == Domain::HalfLine) lo = std::max<std::int64_t>(lo, 0);
    if (lo >= hi) throw InvalidArgument("growth rate window [" + std::to_string(lo) + "," +
                                        std::to_string(hi) + "] is empty");
    if (log_eval_(0) != 0.0)
        throw InvalidArgument("growth rate '" + label_ + "': u_0 != 1");
    double prev = log_eval_(lo);
    for (std::int64_t m = lo + 1; m <= hi; ++m) {
        double cur = log_eval_(m);
        if (!(cur > prev))
            throw InvalidArgument("growth rate '" + label_ + "' is not strictly increasing at m=" +
                                  std::to_string(m));
        prev = cur;
    }
    // Window-dependent escape threshold: the endpoints must have cleared at
    // least half the window's total log-range away from u_0 = 1.
    const double range = log_eval_(hi) - log_eval_(std::max<std::int64_t>(lo, 0));
    const double delta = std::max(range / (2.0 * double(hi - lo)), 1e-6);
    if (log_eval_(hi) < delta)
        throw InvalidArgument("growth rate '" + label_ + "': u_m does not grow toward +inf");
    if (domain_ == Domain::FullLine && log_eval_(lo) > -delta)
        throw InvalidArgument("growth rate '" + label_ + "': u_m does not decay toward -inf");
}

GrowthRate GrowthRate::unit() {
    return GrowthRate("one", Domain::FullLine, [](std::int64_t) { return 0.0; });
}

GrowthRate make_standard_rate(RateFamily family, const std::vector<double>& params,
                              Domain domain) {
    switch (family) {
        case RateFamily::Exponential: {
            const double c = params.empty() ? 1.0 : params[0];
            if (!(c > 0)) throw InvalidArgument("exponential rate needs a positive rate constant");
            GrowthRate r("exp", domain, [c](std::int64_t m) { return c * double(m); });
            r.validate(domain == Domain::HalfLine ? 0 : -20, 20);
            return r;
        }
        case RateFamily::Polynomial: {
            const double p = params.empty() ? 1.0 : params[0];
            if (!(p > 0)) throw InvalidArgument("polynomial rate needs a positive exponent");
            if (domain == Domain::FullLine)
                throw InvalidArgument(
                    "polynomial rate is only defined on the half line (u_m = (m+1)^p cannot "
                    "decay to 0 as m -> -inf)");
            GrowthRate r("poly", Domain::HalfLine,
                         [p](std::int64_t m) { return p * std::log(double(m) + 1.0); });
            r.validate(0, 20);
            return r;
        }
        case RateFamily::ExpPolylog: {
            if (params.empty())
                throw InvalidArgument("exp-polylog rate needs polynomial coefficients");
            auto coeffs = params;  // u_m = exp(c_1 m + c_2 m^2 + ...)
            GrowthRate r("exp-poly", domain, [coeffs](std::int64_t m) {
                double x = double(m), pw = 1.0, s = 0.0;
                for (double c : coeffs) {
                    pw *= x;
                    s += c * pw;
                }
                return s;
            });
            r.validate(domain == Domain::HalfLine ? 0 : -20, 20);
            return r;
        }
        case RateFamily::Custom:
            throw InvalidArgument("custom rates are built from an explicit evaluator");
    }
    throw InvalidArgument("unknown rate family");
}

GrowthRate make_standard_rate(std::string label, Domain domain,
                              std::function<double(std::int64_t)> log_eval,
                              std::int64_t check_lo, std::int64_t check_hi) {
    GrowthRate r(std::move(label), domain, std::move(log_eval));
    r.validate(check_lo, check_hi);
    return r;
}

int check_density(const GrowthRate& u, DensityClass which, double interval_length,
                  std::int64_t lo, std::int64_t hi) {
    if (u.domain() == Domain::HalfLine) lo = std::max<std::int64_t>(lo, 0);
    if (lo > hi) throw InvalidArgument("check_density: empty window");
    if (!(interval_length > 0)) throw InvalidArgument("check_density: interval length must be > 0");
    std::vector<double> pts;
    pts.reserve(std::size_t(hi - lo + 1));
    for (std::int64_t m = lo; m <= hi; ++m) {
        const double v = u(m);
        pts.push_back(which == DensityClass::DirectPoints ? v : 1.0 / v);
    }
    std::sort(pts.begin(), pts.end());
    // Max points in any half-open interval [x, x+L): attained with x at a point.
    // Points within 1e-12 relative of the right endpoint count as outside, so
    // evaluator round-off cannot flip an exact-spacing boundary.
    int best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double end = pts[i] + interval_length;
        const double cutoff = end - 1e-12 * std::max(std::abs(end), 1.0);
        auto it = std::lower_bound(pts.begin() + std::ptrdiff_t(i), pts.end(), cutoff);
        best = std::max(best, int(it - (pts.begin() + std::ptrdiff_t(i))));
    }
    return best;
}

ZetaValue zeta(double exponent, double tol) {
    if (!(exponent < -1.0))
        throw InvalidArgument("zeta: series sum_{t>=1} t^l is divergent for l >= -1");
    if (!(tol > 0)) throw InvalidArgument("zeta: tolerance must be positive");
    // Partial sum S_N plus the integral-test bracket for the remainder:
    //   int_{N+1}^inf x^l dx <= R_N <= int_N^inf x^l dx.
    const double p = -exponent;
    auto tail_int = [&](double x) { return std::pow(x, 1.0 - p) / (p - 1.0); };
    double s = 0.0;
    std::uint64_t n = 0;
    for (;;) {
        ++n;
        s += std::pow(double(n), exponent);
        if (n >= 8) {
            const double upper = tail_int(double(n));
            const double lower = tail_int(double(n) + 1.0);
            if ((upper - lower) / 2.0 <= tol) {
                ZetaValue z;
                z.exponent = exponent;
                z.value = s + (upper + lower) / 2.0;
                z.tail_bound = (upper - lower) / 2.0;
                return z;
            }
        }
        if (n > (std::uint64_t(1) << 33))
            throw InvalidArgument("zeta: tolerance unreachable by direct summation");
    }
}

TailSum tail_sum_backward(const GrowthRate& u, std::int64_t m, double exponent,
                          std::int64_t window_floor) {
    if (window_floor >= m)
        throw InvalidArgument("tail_sum_backward: window floor must lie below m");
    if (u.domain() == Domain::HalfLine && window_floor < 0)
        throw InvalidArgument("tail_sum_backward: window floor below 0 on a half-line rate");
    TailSum out;
    const double lum = u.log_at(m);
    int small_streak = 0;
    for (std::int64_t tau = m - 1; tau >= window_floor; --tau) {
        const double term = std::exp(exponent * (lum - u.log_at(tau)));
        out.value += term;
        if (term <= 1e-14 * out.value) {
            if (++small_streak >= 10) {
                out.converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    return out;
}

}  // namespace dicho
