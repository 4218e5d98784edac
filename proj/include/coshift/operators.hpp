#pragma once

// Truncated matrices over declared Fourier windows for the shift S, its
// dilation, the rank-one-perturbed isometry V and its unitary dilation,
// the functional calculus phi_t(.) and the cocycle W_t, plus the
// structural verifications (Wold split, Beurling action, dilation defect).

#include <vector>

#include "coshift/modelspace.hpp"

namespace coshift {

enum class BasisTag { AnalyticFourier, BilateralFourier };

struct TruncatedOperator {
  CMat matrix;
  int degree = 0;  // N
  BasisTag basis = BasisTag::AnalyticFourier;
  int interior_margin = 0;  // m; rows/cols within m of a truncation edge
                            // are excluded from residual norms

  bool bilateral() const { return basis == BasisTag::BilateralFourier; }
  int lo() const { return bilateral() ? -degree : 0; }
  int dim() const { return bilateral() ? 2 * degree + 1 : degree + 1; }
  int row_of(int fourier_index) const { return fourier_index - lo(); }

  /// Sub-block away from the truncation edges. Index 0 of the analytic
  /// window is a genuine boundary of H^2 and is kept; the bilateral
  /// window is stripped at both ends.
  CMat interior() const;
  /// Same stripping applied to a window vector.
  CVec interior_part(const CVec& f) const;
};

int default_margin(int N);  // ceil(N / 4)

TruncatedOperator shift_op(int N);
TruncatedOperator bilateral_shift(int N);

/// Multiplication by an analytic symbol: Toeplitz on the analytic window,
/// Laurent-banded on the bilateral one. Entry (j, k) = symbol[j - k].
TruncatedOperator mult_by(const CVec& symbol, BasisTag window, int N);

/// f -> z f + (f, g)(1 - theta) on the analytic window.
TruncatedOperator build_V(const RationalInner& theta, int N);

/// f -> z f + (f, g)(1 - theta) - (f, conj(z))(1 - conj(theta(1)) theta)
/// on the bilateral window; restricts to build_V on analytic coordinates.
TruncatedOperator build_Vtilde(const RationalInner& theta, int N);

/// Multi-component dilation: bilateral shift plus one rank-one analytic
/// correction per component (through the partial products of the Clark
/// inner functions) plus the coanalytic correction of the full product.
TruncatedOperator build_multi_V(const MultiMeasureSystem& system, int N,
                                int degree_cap = 64);

/// phi_t(V) assembled blockwise: the n x n Clark unitary is exponentiated
/// by eigendecomposition and lifted by omega; the shift part acts as
/// theta M_{phi_t} conj(theta) on theta H^2 coordinates. t = 0 yields the
/// identity (constant symbol 1).
TruncatedOperator calculus_V(const ClarkFrame& frame, double t);

/// phi_t of the dilation: equals calculus_V on the analytic block; a
/// coanalytic column u = e_k (k < 0) maps to
/// P_-(phi_t u) + conj(theta(1)) theta P_+(phi_t u).
TruncatedOperator calculus_Vtilde(const ClarkFrame& frame, double t);

/// W_t = phi_t(Vtilde) * M_{phi_t}^H; the adjoint is the exact inverse of
/// the unitary bilateral multiplication in the infinite-dimensional limit.
TruncatedOperator cocycle_W(const ClarkFrame& frame, double t);

/// phi_t(Vtilde) - phi_t(Stilde) on the bilateral window.
TruncatedOperator dilation_difference(const ClarkFrame& frame, double t);

struct WoldReport {
  int unitary_rank = 0;
  double unitary_angle_sin = 0.0;  // largest principal angle vs span(omega)
  double beurling_residual = 0.0;  // max_h ||V (theta h) - theta (z h)||
  bool angle_pass = false;
  bool beurling_pass = false;
};

/// Range-intersection Wold split: an orthonormal basis of
/// range(V^(2N)) (nested ranges; computed by repeated squaring with
/// QR orthonormalization at rank tolerance 1e-8) is compared against
/// span(omega), and the Beurling action V(theta h) = theta(z h) is
/// checked columnwise.
WoldReport wold_check(const TruncatedOperator& V, const RationalInner& theta,
                      const ClarkFrame& frame, double angle_tol = 1e-4,
                      double beurling_tol = 1e-7);

/// Relative interior residual of
/// (phi_t(Vtilde) - phi_t(Stilde))(conj(phi_t) v) + (1 - conj(theta(1)) theta) v
/// for an analytic v in K_{phi_t}. Throws "NotInModelSpace" when v fails
/// the membership check at membership_tol. Note the gate is tight: the
/// window truncation of a genuine K_{phi_t} vector re-projects only to
/// within the phi_t coefficient tail (about sqrt(1/N)), so at the default
/// tolerance every nonzero truncated vector is rejected; callers that
/// want the residual measured open the gate to the truncation floor.
double defect_Q(const ClarkFrame& frame, double t, const CVec& v,
                double membership_tol = 1e-6);

/// Same residual with the dilation difference supplied by the caller
/// (avoids rebuilding it for every test vector).
double defect_Q(const ClarkFrame& frame, const TruncatedOperator& dilation_diff,
                double t, const CVec& v, double membership_tol = 1e-6);

}  // namespace coshift
