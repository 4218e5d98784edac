#pragma once

// Dense complex polynomials in ascending coefficient order.

#include "coshift/types.hpp"

namespace coshift::poly {

CVec mul(const CVec& a, const CVec& b);

Complex eval(const CVec& a, Complex z);

/// First N+1 Maclaurin coefficients of num/den; requires den(0) != 0.
CVec series_div(const CVec& num, const CVec& den, int N);

/// Coefficients 0..N of the product a*b (a, b analytic).
CVec conv_trunc(const CVec& a, const CVec& b, int N);

/// Divide p by (z - 1); returns quotient, remainder goes to *rem if given.
CVec deflate_at_one(const CVec& p, Complex* rem = nullptr);

/// Strip trailing coefficients below tol * max|coeff|.
CVec trim(const CVec& p, double tol = 1e-14);

}  // namespace coshift::poly
