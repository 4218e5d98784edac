#pragma once

// The Clark unitary equivalence in truncated Taylor coordinates: the
// embedding Omega of L^2(mu) onto K_theta, the reproducing vector g, the
// n x n Clark unitary, and the Riesz / model-space projections.

#include "coshift/inner.hpp"
#include "coshift/measures.hpp"
#include "coshift/types.hpp"

namespace coshift {

struct ClarkFrame {
  AtomicMeasure mu;
  RationalInner theta;
  CVec g;              // Taylor coefficients, length N+1
  CMat omega;          // (N+1) x n, columns = images of the normalized atoms
  CMat clark_unitary;  // n x n matrix of multiplication by z, atom basis
  int truncation = 0;  // N
  double gram_deviation = 0.0;  // ||omega^H omega - I||_2 at truncation
};

/// g(z) = (theta(z) - theta(0)) / (z (1 - theta(0))), as Taylor
/// coefficients up to degree N. Throws "ThetaZeroIsOne".
CVec reproducing_g(const RationalInner& theta, int N);

/// Builds the frame. Column j of omega is the Taylor expansion of
/// sqrt(mu_j) (1 - theta(z)) / (1 - conj(xi_j) z), computed in the
/// pole-free form 2 xi_j sqrt(mu_j) prod_{l != j}(xi_l - z) / (N + D);
/// the raw form has a boundary 0/0 that ruins floating-point accuracy.
ClarkFrame clark_embedding(const AtomicMeasure& mu, const RationalInner& theta,
                           int N);

/// omega^H (Shift omega + (1-theta) (g, .)-row): the compression of
/// f -> z f + (f, g)(1 - theta) to K_theta coordinates.
CMat clark_unitary_direct(const ClarkFrame& frame);

// Bilateral vectors live on the window [-N..N]; entry i is stored at
// index i + N.
CVec project_plus(const CVec& f, int N);
CVec project_minus(const CVec& f, int N);

/// P_{K_u} f = f - u P_+(conj(u) f) for an inner symbol u given by Taylor
/// coefficients to degree >= N; f analytic of degree N.
CVec project_model(const CVec& u, const CVec& f);

}  // namespace coshift
