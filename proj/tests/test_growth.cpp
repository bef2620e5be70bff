#include <doctest.h>

#include <cmath>
#include <vector>

#include "dicho/errors.hpp"
#include "dicho/growth.hpp"

using namespace dicho;

namespace {

// Independent oracle: brute-force sliding count over a fine grid of interval
// placements (every point and midpoints between consecutive points).
int sliding_count_oracle(std::vector<double> pts, double len) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> starts = pts;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) starts.push_back(0.5 * (pts[i] + pts[i + 1]));
    int best = 0;
    for (double x : starts) {
        int c = 0;
        for (double q : pts)
            if (q >= x && q < x + len) ++c;
        best = std::max(best, c);
    }
    return best;
}

// Independent oracle for the zeta tail: long-double direct summation plus the
// integral-test midpoint, good to ~1e-12 for the exponents used here.
long double zeta_oracle(long double expo, std::uint64_t terms) {
    long double s = 0.0L;
    for (std::uint64_t t = terms; t >= 1; --t) s += std::pow((long double)t, expo);
    const long double p = -expo;
    const long double up = std::pow((long double)terms, 1.0L - p) / (p - 1.0L);
    const long double lo = std::pow((long double)terms + 1.0L, 1.0L - p) / (p - 1.0L);
    return s + (up + lo) / 2.0L;
}

}  // namespace

TEST_CASE("standard rate families") {
    auto e1 = make_standard_rate(RateFamily::Exponential, {1.0});
    CHECK(e1(0) == 1.0);  // u_0 = 1 exactly
    CHECK(e1(1) == doctest::Approx(std::exp(1.0)));
    CHECK(e1.abs_at(-3) == doctest::Approx(std::exp(3.0)));

    auto poly = make_standard_rate(RateFamily::Polynomial, {1.0}, Domain::HalfLine);
    CHECK(poly(4) == doctest::Approx(5.0));  // u_m = m + 1
    CHECK(poly(0) == 1.0);

    auto ec = make_standard_rate(RateFamily::ExpPolylog, {1.0, 0.0, 1.0});  // e^{m + m^3}
    CHECK(ec(1) == doctest::Approx(std::exp(2.0)));
    CHECK(ec.log_at(10) == doctest::Approx(1010.0));

    CHECK_THROWS_AS(make_standard_rate(RateFamily::Polynomial, {1.0}, Domain::FullLine),
                    InvalidArgument);
    // Non-monotone custom evaluator is rejected.
    CHECK_THROWS_AS(make_standard_rate("bad", Domain::FullLine,
                                       [](std::int64_t m) { return -0.1 * double(m); }),
                    InvalidArgument);
    // u_0 != 1 is rejected.
    CHECK_THROWS_AS(make_standard_rate("shifted", Domain::FullLine,
                                       [](std::int64_t m) { return double(m) + 1.0; }),
                    InvalidArgument);
}

TEST_CASE("zeta values and guards") {
    auto z2 = zeta(-2.0, 1e-10);
    CHECK(std::abs(z2.value - 1.6449340668482264) <= 1e-10);  // pi^2/6
    CHECK(z2.tail_bound <= 1e-10);

    auto z15 = zeta(-1.5, 1e-8);
    // Frozen from the summation oracle below (= 2.612375348685488...).
    const double frozen = 2.61237534868548834;
    CHECK(std::abs(z15.value - frozen) <= z15.tail_bound + 1e-11);
    CHECK(z15.tail_bound <= 1e-8);
    CHECK(std::abs(double(zeta_oracle(-1.5L, 20'000'000)) - frozen) <= 1e-11);

    CHECK_THROWS_AS(zeta(-1.0, 1e-8), InvalidArgument);  // harmonic series
    CHECK_THROWS_AS(zeta(-0.5, 1e-8), InvalidArgument);

    // Monotone decreasing in |l|.
    auto z3 = zeta(-3.0, 1e-10);
    CHECK(z15.value > z2.value);
    CHECK(z2.value > z3.value);
}

TEST_CASE("density counts") {
    auto poly = make_standard_rate(RateFamily::Polynomial, {1.0}, Domain::HalfLine);
    // Integers are unit-spaced: a half-open unit interval holds exactly one.
    CHECK(check_density(poly, DensityClass::DirectPoints, 1.0, 0, 100) == 1);
    CHECK(check_density(poly, DensityClass::DirectPoints, 1.5, 0, 100) == 2);

    auto e1 = make_standard_rate(RateFamily::Exponential, {1.0});
    const int got = check_density(e1, DensityClass::DirectPoints, 1.0, 0, 20);
    std::vector<double> pts;
    for (int m = 0; m <= 20; ++m) pts.push_back(std::exp(double(m)));
    CHECK(got == sliding_count_oracle(pts, 1.0));
    CHECK(got == 1);

    // Reciprocal points of e^m cluster below 1: the count reflects that.
    CHECK(check_density(e1, DensityClass::ReciprocalPoints, 1.0, 0, 20) == 21);
    // Backward half of the line: reciprocals spread out.
    CHECK(check_density(e1, DensityClass::ReciprocalPoints, 1.0, -20, 0) <= 2);

    CHECK_THROWS_AS(check_density(e1, DensityClass::DirectPoints, 0.0, 0, 10), InvalidArgument);
    CHECK_THROWS_AS(check_density(e1, DensityClass::DirectPoints, 1.0, 10, 2), InvalidArgument);

    // Count is monotone non-decreasing in the interval length.
    int prev = 0;
    for (double len : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        int c = check_density(e1, DensityClass::DirectPoints, len, 0, 20);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("backward tail sums") {
    auto e1 = make_standard_rate(RateFamily::Exponential, {1.0});
    // Geometric oracle: sum_{j>=1} e^{-2j} = 1/(e^2 - 1).
    const double geo = 0.15651764274966565;
    auto t = tail_sum_backward(e1, 0, -2.0, -200);
    CHECK(t.converged);
    CHECK(t.value == doctest::Approx(geo).epsilon(1e-12));

    // Shift invariance for the exponential family.
    for (std::int64_t m = -10; m <= 10; ++m) {
        auto tm = tail_sum_backward(e1, m, -2.0, m - 200);
        CHECK(std::abs(tm.value - geo) <= 1e-12);
    }

    // Single-term window.
    auto one = tail_sum_backward(e1, 5, -2.0, 4);
    CHECK(one.value == doctest::Approx(std::exp(-2.0)));
    CHECK_FALSE(one.converged);

    // A slowly decaying summand on a short window is flagged, not silently cut.
    auto poly = make_standard_rate(RateFamily::Polynomial, {1.0}, Domain::HalfLine);
    auto slow = tail_sum_backward(poly, 60, -1.5, 0);
    CHECK_FALSE(slow.converged);
}

TEST_CASE("unit rate is degenerate but well-behaved") {
    auto one = GrowthRate::unit();
    CHECK(one(5) == 1.0);
    CHECK(one.abs_at(-7) == 1.0);
    CHECK_THROWS_AS(one.validate(-10, 10), InvalidArgument);
}
