#pragma once

// Thin wrappers around BLAS/LAPACK for the dense complex kernels that
// dominate the run time. Everything else goes through Eigen directly.

#include "coshift/types.hpp"

namespace coshift::linalg {

/// A * B via zgemm.
CMat mat_prod(const CMat& a, const CMat& b);

/// A^H * B via zgemm.
CMat adj_prod(const CMat& a, const CMat& b);

/// Singular values, descending (zgesdd, values only).
RVec singular_values(const CMat& a);

/// Spectral norm.
double norm2(const CMat& a);

/// Orthonormal basis of range(A) at the given rank tolerance
/// (column-pivoted QR; relative to the largest pivot).
CMat range_basis(const CMat& a, double rank_tol);

/// sin of the largest principal angle between the column spans of two
/// orthonormal frames.
double principal_angle_sin(const CMat& q1, const CMat& q2);

}  // namespace coshift::linalg
