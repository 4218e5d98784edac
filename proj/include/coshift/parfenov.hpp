#pragma once

// The half-plane side: the transplanted inner function Theta, the weight
// w(t) = |1 - conj(Theta(inf)) Theta(t)|^2, the interval sums N_p(w) with
// certified quadratic-decay tails, the boundary moment integral, and the
// model-space embedding comparison.

#include <map>
#include <vector>

#include "coshift/inner.hpp"
#include "coshift/types.hpp"

namespace coshift {

/// Theta(t) = theta((t - i)/(t + i)) for real t.
Complex halfplane_eval(const RationalInner& theta, double t);

/// w(t) = |1 - conj(theta(1)) Theta(t)|^2, in [0, 4].
double weight_at(const RationalInner& theta, double t);

struct ParfenovWeight {
  RationalInner theta;
  Complex theta_at_one;
  std::map<int, double> interval_integrals;  // k -> integral over [k, k+1]
  int K = 0;
  int nodes = 0;
};

/// Gauss-Legendre interval integrals of w over [k, k+1], |k| <= K, with
/// adaptive bisection inside |t| <= 2 where w varies fastest.
ParfenovWeight build_weight(const RationalInner& theta, int K, int nodes);

enum class TailVerdict { Finite, DivergentTrend };
const char* to_string(TailVerdict v);

struct ParfenovSum {
  double p = 0.0;
  int K = 0;
  double partial = 0.0;     // sum over |k| <= K of (integral)^{p/2}
  double tail_bound = 0.0;  // certified remainder; +inf when divergent
  TailVerdict verdict = TailVerdict::Finite;
  int decay_order = 1;      // r: w(t) <= C_w / t^{2r} for large |t|
  double cw = 0.0;
  double increment_ratio = 0.0;  // (S_4K - S_2K)/(S_2K - S_K) when divergent
};

ParfenovSum parfenov_sum(const RationalInner& theta, double p, int K,
                         int nodes);

/// Integral over the circle of |(1 - conj(theta(1)) theta(xi))/(1 - xi)|^{2q}
/// against normalized Lebesgue measure. The zero of the numerator at 1 is
/// cancelled polynomially before quadrature, which leaves a smooth rational
/// integrand; adaptive refinement still guards the neighbourhood of 1.
double boundary_moment(const RationalInner& theta, double q);

struct EmbeddingComparison {
  double p = 0.0;
  double op_power = 0.0;        // ||J||_{S_p}^p on the interior rows
  double parfenov_value = 0.0;  // N_p partial + tail
  bool within = false;          // op_power <= 1.1 * parfenov_value
};

struct EmbeddingReport {
  RVec sigmas;
  int rank = 0;
  std::vector<EmbeddingComparison> comparisons;
};

/// Multiplication by 1 - conj(theta(1)) theta restricted to K_{phi_t}:
/// the model-space basis comes from projecting monomials and
/// orthonormalizing ("BasisDeficient" on rank collapse); singular values
/// are taken over the interior rows.
EmbeddingReport embedding_operator(const RationalInner& theta, double t, int N,
                                   const std::vector<double>& ps, int K,
                                   int nodes);

}  // namespace coshift
