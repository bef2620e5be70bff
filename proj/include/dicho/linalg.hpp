#pragma once

#include <Eigen/Dense>

namespace dicho {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Induced Euclidean (spectral) norm: largest singular value.
double spectral_norm(const Mat& m);

/// Smallest singular value.
double min_singular_value(const Mat& m);

/// Numerical rank: number of singular values above tol * largest.
int numerical_rank(const Mat& m, double rel_tol = 1e-8);

/// Largest principal angle (as its sine) between the column spans of two
/// projections of equal rank. Equals the gap metric between the subspaces.
double subspace_gap(const Mat& p1, const Mat& p2);

/// Orthonormal basis of the column span of a projection (rank by 1e-8 cut).
Mat range_basis(const Mat& p);

}  // namespace dicho
