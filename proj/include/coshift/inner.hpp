#pragma once

// Inner functions: Clark inner functions of atomic measures (finite
// Blaschke products kept in rational form), products of such functions,
// and the singular inner family phi_t(z) = exp(t (z+1)/(z-1)).

#include <vector>

#include "coshift/measures.hpp"
#include "coshift/types.hpp"

namespace coshift {

struct RationalInner {
  CVec numer;  // ascending coefficients
  CVec denom;  // all roots strictly outside the closed disc
  int degree = 0;

  Complex eval(Complex z) const;     // requires |z| <= 1 + 1e-12
  Complex at_one() const;            // boundary value at z = 1
  CVec taylor(int N) const;          // Maclaurin coefficients 0..N

  static RationalInner constant(Complex c);
};

/// theta = (N - D)/(N + D) where D(z) = prod_j (xi_j - z) and
/// N(z) = sum_j mu_j (xi_j + z) prod_{l != j} (xi_l - z). The rational
/// form is normalized so that denom(0) = 1 and verified against the
/// boundary-modulus, pole-location, atom-value and Herglotz checks.
RationalInner clark_inner(const AtomicMeasure& mu);

Complex eval_inner(const RationalInner& theta, Complex z);
Complex boundary_value_at_one(const RationalInner& theta);

/// sum_j mu_j (xi_j + z)/(xi_j - z).
Complex herglotz_transform(const AtomicMeasure& mu, Complex z);

/// max over 64 interior sample points of
/// |(1+theta)/(1-theta) - herglotz_transform|.
double herglotz_residual(const AtomicMeasure& mu, const RationalInner& theta);

struct SingularInnerFlow {
  double t = 0.0;
  CVec coeffs;  // c_0 .. c_N, c_0 = exp(-t)
};

/// Taylor coefficients of phi_t through the Laguerre three-term recurrence:
/// c_0 = e^-t, c_n = e^-t (L_n(2t) - L_{n-1}(2t)).
SingularInnerFlow phi_coeffs(double t, int N);

/// Pointwise value of phi_t; z must avoid the singular point 1.
Complex phi_eval(double t, Complex z);

struct InnerCheck {
  double boundary_unimodularity;  // max | |theta|-1 | on 256 boundary samples
  double disc_bound_excess;       // max(|theta|-1, 0) on the 0.99 grid
  double atom_value_deviation;    // max_j |theta(xi_j) - 1| (Clark only)
};
InnerCheck verify_inner(const RationalInner& theta,
                        const AtomicMeasure* mu = nullptr);

/// Multiplies the rational forms; throws "DegreeCapExceeded" past the cap.
RationalInner product_inner(const std::vector<RationalInner>& thetas,
                            int degree_cap = 64);

/// Partial products theta_hat_n = prod_{k < n} theta_k for n = 1..K+1
/// (so front() is the constant 1 and back() is the full product).
std::vector<RationalInner> partial_products(
    const std::vector<RationalInner>& thetas, int degree_cap = 64);

}  // namespace coshift
