#include <doctest.h>

#include <cmath>
#include <random>

#include "dicho/cocycle.hpp"
#include "dicho/errors.hpp"
#include "dicho/linalg.hpp"

using namespace dicho;

namespace {

Mat rot(double t) {
    Mat r(2, 2);
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}

Cocycle scalar_doubling() {
    return Cocycle(1, [](std::int64_t) {
        Mat a(1, 1);
        a(0, 0) = 2.0;
        return a;
    });
}

}  // namespace

TEST_CASE("evolution operator basics") {
    auto c = scalar_doubling();
    CHECK(c.evolve(3, 3).isIdentity(0.0));
    CHECK(c.evolve(4, 1)(0, 0) == doctest::Approx(8.0));
    // Inverse identity: A(m,n) = A(n,m)^{-1}.
    CHECK(c.evolve(1, 4)(0, 0) == doctest::Approx(1.0 / c.evolve(4, 1)(0, 0)));
}

TEST_CASE("cocycle identity on random triples") {
    // A rotating hyperbolic sequence. The middle index is kept between the
    // endpoints: with it outside, the two factors both blow up and their
    // product cancels, which no floating-point evaluation can survive.
    Cocycle c(2, [](std::int64_t m) {
        return Mat(rot(0.3 * double(m)) * Eigen::DiagonalMatrix<double, 2>(0.5, 2.0));
    });
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::int64_t> pick(-20, 20);
    for (int i = 0; i < 200; ++i) {
        std::int64_t v[3] = {pick(rng), pick(rng), pick(rng)};
        std::sort(v, v + 3);
        for (auto [m, s, n] : {std::tuple{v[2], v[1], v[0]}, std::tuple{v[0], v[1], v[2]}}) {
            Mat lhs = c.evolve(m, s) * c.evolve(s, n);
            Mat rhs = c.evolve(m, n);
            CHECK(spectral_norm(Mat(lhs - rhs)) <= 1e-10 * spectral_norm(rhs));
        }
    }
    // For a diagonal sequence the identity is insensitive to the ordering.
    auto d = scalar_doubling();
    for (int i = 0; i < 50; ++i) {
        std::int64_t m = pick(rng), s = pick(rng), n = pick(rng);
        CHECK(d.evolve(m, s)(0, 0) * d.evolve(s, n)(0, 0) ==
              doctest::Approx(d.evolve(m, n)(0, 0)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate generators are rejected by index") {
    Cocycle c(2, [](std::int64_t m) {
        Mat a = Mat::Identity(2, 2);
        if (m == 7) a(1, 1) = 1e-15;
        return a;
    });
    CHECK_NOTHROW(c.evolve(5, 0));
    CHECK_THROWS_AS(c.evolve(9, 6), DegeneracyError);
}

TEST_CASE("oscillating diagonal system") {
    auto em = make_standard_rate(RateFamily::Exponential, {1.0});

    SUBCASE("theta2 = 0 strips the oscillation") {
        auto bc = oscillating_diagonal(1.0, 0.0, 1.0, em, em, em, em);
        Mat a0 = bc.base().matrix(5);
        CHECK(a0(0, 0) == doctest::Approx(std::exp(-1.0)));
        CHECK(a0(1, 1) == doctest::Approx(std::exp(1.0)));
        CHECK(a0(0, 1) == 0.0);
    }

    SUBCASE("telescoping: per-step increments sum to the closed form") {
        auto bc = oscillating_diagonal(1.0, 0.1, 1.0, em, em, em, em);
        for (std::int64_t n = -30; n <= 30; n += 7) {
            for (std::int64_t m = n; m <= 30; m += 5) {
                // Recover sum of d1_tau from the stable entries.
                double acc = 0.0;
                for (std::int64_t t = n; t < m; ++t) {
                    const double entry = bc.stable_block(t)(0, 0);
                    acc += (std::log(entry) + 1.0 * (em.log_at(t + 1) - em.log_at(t))) / 0.1;
                }
                CHECK(acc == doctest::Approx(oscillation_closed_form(em, m, n)).epsilon(1e-9));
            }
        }
    }

    SUBCASE("stable part of the evolution matches the closed form") {
        auto bc = oscillating_diagonal(1.0, 0.1, 1.0, em, em, em, em);
        for (std::int64_t n : {-12, -3, 0, 4}) {
            for (std::int64_t m : {5, 9, 15}) {
                const double want =
                    std::exp(-1.0 * (em.log_at(m) - em.log_at(n)) +
                             0.1 * oscillation_closed_form(em, m, n));
                CHECK(bc.base().evolve(m, n)(0, 0) == doctest::Approx(want).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("conjugation by a bounded reduction") {
    SUBCASE("identity reduction is a no-op") {
        auto a = scalar_doubling();
        Reduction r{[](std::int64_t) { return Mat::Identity(1, 1); }, 1.0};
        auto b = conjugate(a, r);
        CHECK(b.matrix(3)(0, 0) == doctest::Approx(2.0));
    }

    SUBCASE("scalars commute") {
        auto a = Cocycle(1, [](std::int64_t) {
            Mat v(1, 1);
            v(0, 0) = 3.0;
            return v;
        });
        Reduction r{[](std::int64_t) {
                        Mat v(1, 1);
                        v(0, 0) = 2.0;
                        return v;
                    },
                    2.5};
        CHECK(conjugate(a, r).matrix(0)(0, 0) == doctest::Approx(3.0));
    }

    SUBCASE("evolution conjugates as a whole") {
        Cocycle a(2, [](std::int64_t m) {
            return Mat(rot(0.2 * double(m + 1)) * Eigen::DiagonalMatrix<double, 2>(0.5, 2.0) *
                       rot(-0.2 * double(m)));
        });
        Reduction r{[](std::int64_t m) { return rot(0.2 * double(m)); }, 1.0 + 1e-12};
        auto b = conjugate(a, r);
        for (std::int64_t n = -20; n <= 20; n += 4) {
            for (std::int64_t m = -20; m <= 20; m += 3) {
                Mat want = rot(0.2 * double(m)).inverse() * a.evolve(m, n) * rot(0.2 * double(n));
                Mat got = b.evolve(m, n);
                CHECK(spectral_norm(Mat(got - want)) <= 1e-10 * (1.0 + spectral_norm(want)));
            }
        }
    }

    SUBCASE("violated norm bound is reported") {
        auto a = scalar_doubling();
        Reduction r{[](std::int64_t m) {
                        Mat v(1, 1);
                        v(0, 0) = std::exp(0.1 * double(m));
                        return v;
                    },
                    1.5};
        auto b = conjugate(a, r);
        CHECK_THROWS_AS(b.matrix(30), InvalidArgument);
    }
}
