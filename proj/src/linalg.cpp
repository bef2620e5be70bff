#include "dicho/linalg.hpp"

#include <Eigen/SVD>

namespace dicho {

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double min_singular_value(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

int numerical_rank(const Mat& m, double rel_tol) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0)) ++r;
    return r;
}

Mat range_basis(const Mat& p) {
    Eigen::JacobiSVD<Mat> svd(p, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(0) > 0.0 && sv(i) > 1e-8 * sv(0)) ++r;
    return svd.matrixU().leftCols(r);
}

double subspace_gap(const Mat& p1, const Mat& p2) {
    Mat b1 = range_basis(p1);
    Mat b2 = range_basis(p2);
    if (b1.cols() == 0 && b2.cols() == 0) return 0.0;
    // sin of the largest principal angle = || B1 B1^T - B2 B2^T ||.
    Mat d = b1 * b1.transpose() - b2 * b2.transpose();
    return spectral_norm(d);
}

}  // namespace dicho
