#include "coshift/operators.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "coshift/linalg.hpp"
#include "coshift/poly.hpp"

namespace coshift {

int default_margin(int N) { return (N + 3) / 4; }

CMat TruncatedOperator::interior() const {
  const int m = interior_margin;
  if (bilateral()) {
    const int d = dim() - 2 * m;
    return matrix.block(m, m, d, d);
  }
  const int d = dim() - m;
  return matrix.block(0, 0, d, d);
}

CVec TruncatedOperator::interior_part(const CVec& f) const {
  const int m = interior_margin;
  if (bilateral()) return f.segment(m, dim() - 2 * m);
  return f.head(dim() - m);
}

TruncatedOperator shift_op(int N) {
  TruncatedOperator op{CMat::Zero(N + 1, N + 1), N, BasisTag::AnalyticFourier,
                       default_margin(N)};
  for (int k = 0; k < N; ++k) op.matrix(k + 1, k) = 1.0;
  return op;
}

TruncatedOperator bilateral_shift(int N) {
  TruncatedOperator op{CMat::Zero(2 * N + 1, 2 * N + 1), N,
                       BasisTag::BilateralFourier, default_margin(N)};
  for (int k = 0; k < 2 * N; ++k) op.matrix(k + 1, k) = 1.0;
  return op;
}

TruncatedOperator mult_by(const CVec& symbol, BasisTag window, int N) {
  const int dim = window == BasisTag::BilateralFourier ? 2 * N + 1 : N + 1;
  TruncatedOperator op{CMat::Zero(dim, dim), N, window, default_margin(N)};
  for (int k = 0; k < dim; ++k) {
    const int dmax = std::min<int>(dim - 1 - k, static_cast<int>(symbol.size()) - 1);
    for (int d = 0; d <= dmax; ++d) op.matrix(k + d, k) = symbol[d];
  }
  return op;
}

TruncatedOperator build_V(const RationalInner& theta, int N) {
  TruncatedOperator op = shift_op(N);
  const CVec g = reproducing_g(theta, N);
  CVec c = -theta.taylor(N);
  c[0] += 1.0;  // 1 - theta
  op.matrix += c * g.adjoint();
  return op;
}

TruncatedOperator build_Vtilde(const RationalInner& theta, int N) {
  TruncatedOperator op = bilateral_shift(N);
  const int off = N;  // row of Fourier index 0
  const CVec th = theta.taylor(N);
  const CVec g = reproducing_g(theta, N);
  const Complex th1 = theta.at_one();

  CVec c = CVec::Zero(2 * N + 1);
  c.segment(off, N + 1) = -th;
  c[off] += 1.0;
  CVec gfull = CVec::Zero(2 * N + 1);
  gfull.segment(off, N + 1) = g;
  op.matrix += c * gfull.adjoint();

  CVec d = CVec::Zero(2 * N + 1);
  d.segment(off, N + 1) = -std::conj(th1) * th;
  d[off] += 1.0;
  op.matrix.col(off - 1) -= d;  // -(f, conj(z)) picks the -1st coefficient
  return op;
}

TruncatedOperator build_multi_V(const MultiMeasureSystem& system, int N,
                                int degree_cap) {
  std::vector<RationalInner> thetas;
  thetas.reserve(system.components.size());
  for (const auto& mu : system.components) thetas.push_back(clark_inner(mu));
  const std::vector<RationalInner> hats = partial_products(thetas, degree_cap);
  const RationalInner product = hats.back();

  TruncatedOperator op = bilateral_shift(N);
  const int off = N;
  for (size_t k = 0; k < thetas.size(); ++k) {
    const CVec hat = hats[k].taylor(N);
    const CVec thk = thetas[k].taylor(N);
    CVec ck = -thk;
    ck[0] += 1.0;
    const CVec gk = reproducing_g(thetas[k], N);
    CVec col = CVec::Zero(2 * N + 1);
    col.segment(off, N + 1) = poly::conv_trunc(hat, ck, N);
    CVec row = CVec::Zero(2 * N + 1);
    row.segment(off, N + 1) = poly::conv_trunc(hat, gk, N);
    op.matrix += col * row.adjoint();
  }
  const CVec thp = product.taylor(N);
  const Complex th1 = product.at_one();
  CVec d = CVec::Zero(2 * N + 1);
  d.segment(off, N + 1) = -std::conj(th1) * thp;
  d[off] += 1.0;
  op.matrix.col(off - 1) -= d;
  return op;
}

namespace {

// phi_t applied to the eigenvalues of the n x n Clark unitary, lifted back
// through omega.
CMat unitary_part_calculus(const ClarkFrame& frame, double t) {
  Eigen::ComplexEigenSolver<CMat> eig(frame.clark_unitary);
  if (eig.info() != Eigen::Success)
    throw Error("EigFailed", "clark unitary eigendecomposition failed");
  const CVec lam = eig.eigenvalues();
  for (Eigen::Index j = 0; j < lam.size(); ++j)
    if (std::abs(lam[j] - 1.0) < 1e-6)
      throw Error("SpectrumAtOne",
                  "unitary part has spectrum within 1e-6 of the point 1");
  CVec phl(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) phl[j] = phi_eval(t, lam[j]);
  const CMat f = eig.eigenvectors() * phl.asDiagonal() *
                 eig.eigenvectors().inverse();
  return frame.omega * f * frame.omega.adjoint();
}

}  // namespace

TruncatedOperator calculus_V(const ClarkFrame& frame, double t) {
  const int N = frame.truncation;
  TruncatedOperator op{CMat::Identity(N + 1, N + 1), N,
                       BasisTag::AnalyticFourier, default_margin(N)};
  if (t == 0.0) return op;  // phi_0 is the constant symbol 1

  const CMat pu = unitary_part_calculus(frame, t);
  const CMat th_mat = mult_by(frame.theta.taylor(N), BasisTag::AnalyticFourier, N).matrix;
  const CMat t_phi = mult_by(phi_coeffs(t, N).coeffs, BasisTag::AnalyticFourier, N).matrix;
  CMat shift_part = linalg::mat_prod(th_mat, t_phi);
  shift_part = linalg::mat_prod(shift_part, CMat(th_mat.adjoint()));
  op.matrix = pu + shift_part;
  return op;
}

TruncatedOperator calculus_Vtilde(const ClarkFrame& frame, double t) {
  const int N = frame.truncation;
  TruncatedOperator op{CMat::Identity(2 * N + 1, 2 * N + 1), N,
                       BasisTag::BilateralFourier, default_margin(N)};
  if (t == 0.0) return op;

  const int off = N;
  op.matrix.block(off, off, N + 1, N + 1) = calculus_V(frame, t).matrix;

  const CVec c = phi_coeffs(t, 2 * N).coeffs;
  const CVec th = frame.theta.taylor(N);
  const Complex th1 = frame.theta.at_one();
  for (int k = -N; k < 0; ++k) {
    CVec col = CVec::Zero(2 * N + 1);
    for (int i = k; i < 0; ++i) col[i + off] = c[i - k];  // P_-(phi_t e_k)
    CVec a(N + 1);                                        // P_+(phi_t e_k)
    for (int i = 0; i <= N; ++i) a[i] = c[i - k];
    col.segment(off, N + 1) += std::conj(th1) * poly::conv_trunc(th, a, N);
    op.matrix.col(k + off) = col;
  }
  return op;
}

TruncatedOperator cocycle_W(const ClarkFrame& frame, double t) {
  const int N = frame.truncation;
  TruncatedOperator op = calculus_Vtilde(frame, t);
  if (t == 0.0) return op;
  const CMat m_phi =
      mult_by(phi_coeffs(t, 2 * N).coeffs, BasisTag::BilateralFourier, N).matrix;
  op.matrix = linalg::mat_prod(op.matrix, CMat(m_phi.adjoint()));
  return op;
}

WoldReport wold_check(const TruncatedOperator& V, const RationalInner& theta,
                      const ClarkFrame& frame, double angle_tol,
                      double beurling_tol) {
  const int N = V.degree;
  WoldReport report;

  // range(V^k) is nested in k, so the intersection over k <= 2N equals
  // range(V^(2N)); reach the power by repeated squaring.
  CMat a = V.matrix;
  int power = 1;
  while (power < 2 * N) {
    a = linalg::mat_prod(a, a);
    const double f = a.norm();
    if (f > 1e8) a /= f;  // scale only; the range is what matters
    power *= 2;
  }
  const CMat q = linalg::range_basis(a, 1e-8);
  report.unitary_rank = static_cast<int>(q.cols());
  const Eigen::HouseholderQR<CMat> oqr(frame.omega);
  const CMat omega_on =
      oqr.householderQ() * CMat::Identity(frame.omega.rows(), frame.omega.cols());
  report.unitary_angle_sin = linalg::principal_angle_sin(q, omega_on);
  report.angle_pass = report.unitary_angle_sin <= angle_tol &&
                      report.unitary_rank == frame.omega.cols();

  // V(theta h) = theta (z h) for monomials h with room below the edge.
  const CVec th = theta.taylor(N);
  const int jmax = N - theta.degree - 1;
  double worst = 0.0;
  if (jmax >= 0) {
    CMat u = CMat::Zero(N + 1, jmax + 1);
    CMat w = CMat::Zero(N + 1, jmax + 1);
    for (int j = 0; j <= jmax; ++j) {
      const int len = std::min<int>(static_cast<int>(th.size()), N + 1 - j);
      u.col(j).segment(j, len) = th.head(len);
      const int len1 = std::min<int>(static_cast<int>(th.size()), N - j);
      w.col(j).segment(j + 1, len1) = th.head(len1);
    }
    const CMat r = linalg::mat_prod(V.matrix, u) - w;
    for (int j = 0; j <= jmax; ++j)
      worst = std::max(worst, r.col(j).norm());
  }
  report.beurling_residual = worst;
  report.beurling_pass = worst <= beurling_tol;
  return report;
}

TruncatedOperator dilation_difference(const ClarkFrame& frame, double t) {
  const int N = frame.truncation;
  TruncatedOperator diff = calculus_Vtilde(frame, t);
  diff.matrix -=
      mult_by(phi_coeffs(t, 2 * N).coeffs, BasisTag::BilateralFourier, N).matrix;
  return diff;
}

double defect_Q(const ClarkFrame& frame, double t, const CVec& v,
                double membership_tol) {
  return defect_Q(frame, dilation_difference(frame, t), t, v, membership_tol);
}

double defect_Q(const ClarkFrame& frame, const TruncatedOperator& dilation_diff,
                double t, const CVec& v, double membership_tol) {
  const int N = frame.truncation;
  const int off = N;
  const CVec c = phi_coeffs(t, 2 * N).coeffs;

  const double vnorm = v.norm();
  if (vnorm == 0.0) return 0.0;
  const CVec proj = project_model(c, v);
  if ((proj - v).norm() > membership_tol * std::max(1.0, vnorm))
    throw Error("NotInModelSpace", "v is not in K_{phi_t} at tolerance " +
                                       std::to_string(membership_tol));

  // u = conj(phi_t) v on the bilateral window.
  CVec u = CVec::Zero(2 * N + 1);
  for (int i = -N; i <= N; ++i) {
    Complex s = 0.0;
    for (int j = std::max(0, i); j <= N; ++j) s += std::conj(c[j - i]) * v[j];
    u[i + off] = s;
  }

  CVec r = dilation_diff.matrix * u;
  CVec d = -std::conj(frame.theta.at_one()) * frame.theta.taylor(N);
  d[0] += 1.0;
  r.segment(off, N + 1) += poly::conv_trunc(d, v, N);
  return dilation_diff.interior_part(r).norm() / vnorm;
}

}  // namespace coshift
