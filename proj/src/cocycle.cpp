#include "dicho/cocycle.hpp"

#include <cmath>

#include "dicho/errors.hpp"

namespace dicho {

namespace {

std::uint64_t pair_key(std::int64_t m, std::int64_t n) {
    auto fold = [](std::int64_t v) {
        return std::uint64_t(std::uint32_t(std::int32_t(v)));
    };
    return (fold(m) << 32) | fold(n);
}

}  // namespace

struct Cocycle::Cache {
    std::mutex mx;
    std::size_t budget = 1 << 20;
    // Generator matrices and their inverses, keyed by index.
    std::unordered_map<std::int64_t, Mat> a, ainv;
    // Evolution operators keyed by (m, n), LRU-evicted.
    std::unordered_map<std::uint64_t, std::pair<Mat, std::list<std::uint64_t>::iterator>> evo;
    std::list<std::uint64_t> lru;
};

Cocycle::Cocycle(int dim, std::function<Mat(std::int64_t)> generator, Domain domain,
                 double invertibility_tol, std::size_t memo_budget)
    : dim_(dim),
      domain_(domain),
      invertibility_tol_(invertibility_tol),
      gen_(std::move(generator)),
      shared_(std::make_shared<Cache>()) {
    if (dim <= 0) throw InvalidArgument("cocycle dimension must be positive");
    shared_->budget = memo_budget;
}

std::size_t Cocycle::memo_budget() const { return shared_->budget; }

void Cocycle::check_index(std::int64_t m) const {
    if (domain_ == Domain::HalfLine && m < 0)
        throw InvalidArgument("cocycle index " + std::to_string(m) + " below half-line domain");
}

const Mat& Cocycle::matrix(std::int64_t m) const {
    check_index(m);
    std::lock_guard lock(shared_->mx);
    auto it = shared_->a.find(m);
    if (it != shared_->a.end()) return it->second;
    Mat am = gen_(m);
    if (am.rows() != dim_ || am.cols() != dim_)
        throw InvalidArgument("generator returned a matrix of wrong dimension at m=" +
                              std::to_string(m));
    const double smin = min_singular_value(am);
    const double smax = spectral_norm(am);
    if (!(smin >= invertibility_tol_))
        throw DegeneracyError("A_" + std::to_string(m) + " is numerically singular (sigma_min=" +
                              std::to_string(smin) + ")");
    if (smax / smin > 1e12)
        throw DegeneracyError("A_" + std::to_string(m) + " exceeds the condition cap 1e12");
    return shared_->a.emplace(m, std::move(am)).first->second;
}

const Mat& Cocycle::inverse(std::int64_t m) const {
    matrix(m);  // validates
    std::lock_guard lock(shared_->mx);
    auto it = shared_->ainv.find(m);
    if (it != shared_->ainv.end()) return it->second;
    Mat inv = shared_->a.at(m).inverse();
    return shared_->ainv.emplace(m, std::move(inv)).first->second;
}

Mat Cocycle::evolve(std::int64_t m, std::int64_t n) const {
    check_index(m);
    check_index(n);
    if (m == n) return Mat::Identity(dim_, dim_);
    const std::uint64_t key = pair_key(m, n);
    {
        std::lock_guard lock(shared_->mx);
        auto it = shared_->evo.find(key);
        if (it != shared_->evo.end()) {
            shared_->lru.splice(shared_->lru.begin(), shared_->lru, it->second.second);
            return it->second.first;
        }
    }
    Mat result;
    if (m > n) {
        // A(m, n) = A_{m-1} A(m-1, n); build up from n.
        result = matrix(n);
        for (std::int64_t j = n + 1; j < m; ++j) result = matrix(j) * result;
    } else {
        // A(m, n) = A_m^{-1} ... A_{n-1}^{-1}
        result = inverse(m);
        for (std::int64_t j = m + 1; j < n; ++j) result = result * inverse(j);
    }
    std::lock_guard lock(shared_->mx);
    auto it = shared_->evo.find(key);
    if (it == shared_->evo.end()) {
        shared_->lru.push_front(key);
        shared_->evo.emplace(key, std::make_pair(result, shared_->lru.begin()));
        while (shared_->evo.size() > shared_->budget) {
            shared_->evo.erase(shared_->lru.back());
            shared_->lru.pop_back();
        }
    }
    return result;
}

BlockCocycle::BlockCocycle(int split, std::function<Mat(std::int64_t)> c_gen,
                           std::function<Mat(std::int64_t)> d_gen, Domain domain,
                           double invertibility_tol)
    : split_(split), c_gen_(std::move(c_gen)), d_gen_(std::move(d_gen)) {
    Mat c0 = c_gen_(domain == Domain::HalfLine ? 0 : 0);
    Mat d0 = d_gen_(0);
    const int l = int(c0.rows());
    const int dd = int(d0.rows());
    if (split != l) throw InvalidArgument("block split does not match the C-block dimension");
    auto cg = c_gen_;
    auto dg = d_gen_;
    base_ = Cocycle(
        l + dd,
        [cg, dg, l, dd](std::int64_t m) {
            Mat a = Mat::Zero(l + dd, l + dd);
            a.topLeftCorner(l, l) = cg(m);
            a.bottomRightCorner(dd, dd) = dg(m);
            return a;
        },
        domain, invertibility_tol);
}

Mat BlockCocycle::stable_block(std::int64_t m) const { return c_gen_(m); }
Mat BlockCocycle::unstable_block(std::int64_t m) const { return d_gen_(m); }

Mat BlockCocycle::block_projector() const {
    Mat p = Mat::Zero(dim(), dim());
    p.topLeftCorner(split_, split_).setIdentity();
    return p;
}

Cocycle conjugate(const Cocycle& a, const Reduction& r) {
    auto S = r.S;
    const double bound = r.bound;
    const int d = a.dim();
    return Cocycle(
        d,
        [a, S, bound, d](std::int64_t m) {
            Mat sm = S(m), sm1 = S(m + 1);
            if (spectral_norm(sm) > bound || spectral_norm(sm1) > bound)
                throw InvalidArgument("reduction norm bound violated at m=" + std::to_string(m));
            Mat sm1_inv = sm1.inverse();
            if (spectral_norm(sm1_inv) > bound)
                throw InvalidArgument("reduction inverse norm bound violated at m=" +
                                      std::to_string(m + 1));
            return Mat(sm1_inv * a.matrix(m) * sm);
        },
        a.domain());
}

namespace {
// g(t) = t (sin t - 1) + cos t; the oscillation is a telescoping difference of g.
double osc_g(double t) { return t * (std::sin(t) - 1.0) + std::cos(t); }
}  // namespace

double oscillation_closed_form(const GrowthRate& rate, std::int64_t m, std::int64_t n) {
    return osc_g(rate.log_abs_at(m)) - osc_g(rate.log_abs_at(n));
}

BlockCocycle oscillating_diagonal(double theta1, double theta2, double theta3,
                                  const GrowthRate& h, const GrowthRate& k, const GrowthRate& mu,
                                  const GrowthRate& nu) {
    if (!(theta1 > 0) || !(theta2 >= 0) || !(theta3 > 0))
        throw InvalidArgument("oscillating_diagonal: theta1, theta3 must be positive");
    auto c = [=](std::int64_t m) {
        const double d1 = oscillation_closed_form(mu, m + 1, m);
        Mat v(1, 1);
        v(0, 0) = std::exp(-theta1 * (h.log_at(m + 1) - h.log_at(m)) + theta2 * d1);
        return v;
    };
    auto d = [=](std::int64_t m) {
        const double d2 = oscillation_closed_form(nu, m + 1, m);
        Mat v(1, 1);
        v(0, 0) = std::exp(theta3 * (k.log_at(m + 1) - k.log_at(m)) + theta2 * d2);
        return v;
    };
    return BlockCocycle(1, c, d, Domain::FullLine);
}

}  // namespace dicho
