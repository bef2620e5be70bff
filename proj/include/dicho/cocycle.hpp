#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "dicho/growth.hpp"
#include "dicho/linalg.hpp"

namespace dicho {

/// A sequence of invertible d x d matrices A_m together with its evolution
/// operator
///     A(m,n) = A_{m-1} ... A_n          (m > n)
///            = I                        (m = n)
///            = A_m^{-1} ... A_{n-1}^{-1} (m < n).
///
/// evolve() results are memoized behind a mutex (read-through cache with an
/// LRU budget), so the series solvers can revisit (m, tau) pairs freely.
class Cocycle {
public:
    Cocycle() = default;
    Cocycle(int dim, std::function<Mat(std::int64_t)> generator, Domain domain = Domain::FullLine,
            double invertibility_tol = 1e-12, std::size_t memo_budget = 1 << 20);

    int dim() const { return dim_; }
    Domain domain() const { return domain_; }

    /// A_m, validated: smallest singular value >= invertibility_tol and
    /// condition number <= 1e12 (otherwise DegeneracyError naming m).
    const Mat& matrix(std::int64_t m) const;
    /// A_m^{-1}
    const Mat& inverse(std::int64_t m) const;

    /// The evolution operator A(m, n).
    Mat evolve(std::int64_t m, std::int64_t n) const;

    std::size_t memo_budget() const;

private:
    struct Cache;
    int dim_ = 0;
    Domain domain_ = Domain::FullLine;
    double invertibility_tol_ = 1e-12;
    std::function<Mat(std::int64_t)> gen_;
    std::shared_ptr<Cache> shared_;

    void check_index(std::int64_t m) const;
};

/// A cocycle in block-diagonal form diag(C_m, D_m) with dim(C) = split.
class BlockCocycle {
public:
    BlockCocycle() = default;
    BlockCocycle(int split, std::function<Mat(std::int64_t)> c_gen,
                 std::function<Mat(std::int64_t)> d_gen, Domain domain = Domain::FullLine,
                 double invertibility_tol = 1e-12);

    const Cocycle& base() const { return base_; }
    int split() const { return split_; }
    int dim() const { return base_.dim(); }

    Mat stable_block(std::int64_t m) const;    // C_m
    Mat unstable_block(std::int64_t m) const;  // D_m

    /// Projection onto the first block along the second: diag(I_l, 0).
    Mat block_projector() const;

private:
    Cocycle base_;
    int split_ = 0;
    std::function<Mat(std::int64_t)> c_gen_, d_gen_;
};

/// A bounded change of coordinates: invertible S_m with ||S_m||, ||S_m^{-1}||
/// both <= bound on the active window.
struct Reduction {
    std::function<Mat(std::int64_t)> S;
    double bound = 1.0;
};

/// The cocycle B_m = S_{m+1}^{-1} A_m S_m. Satisfies
/// evolve_B(m,n) = S_m^{-1} evolve_A(m,n) S_n.
Cocycle conjugate(const Cocycle& a, const Reduction& r);

/// The 2x2 diagonal system
///   z1_{m+1} = (h_{m+1}/h_m)^{-theta1} e^{theta2 d1_m} z1_m,
///   z2_{m+1} = (k_{m+1}/k_m)^{ theta3} e^{theta2 d2_m} z2_m,
/// where d1_m = g(log mu_{|m+1|}) - g(log mu_{|m|}) with
/// g(t) = t (sin t - 1) + cos t, and d2_m likewise with nu. The telescoped
/// oscillation d1(m,n) = g(log mu_{|m|}) - g(log mu_{|n|}) makes the stable
/// part of the evolution exactly (h_m/h_n)^{-theta1} e^{theta2 d1(m,n)}.
BlockCocycle oscillating_diagonal(double theta1, double theta2, double theta3,
                                  const GrowthRate& h, const GrowthRate& k, const GrowthRate& mu,
                                  const GrowthRate& nu);

/// Closed-form accumulated oscillation d1(m,n) (and d2 with nu).
double oscillation_closed_form(const GrowthRate& rate, std::int64_t m, std::int64_t n);

}  // namespace dicho
