#include "coshift/modelspace.hpp"

#include <cmath>

#include "coshift/linalg.hpp"
#include "coshift/poly.hpp"

namespace coshift {

CVec reproducing_g(const RationalInner& theta, int N) {
  const CVec th = theta.taylor(N + 1);
  const Complex t0 = th[0];
  if (std::abs(1.0 - t0) < 1e-12)
    throw Error("ThetaZeroIsOne", "theta(0) = 1 leaves no reproducing vector");
  CVec g(N + 1);
  for (int k = 0; k <= N; ++k) g[k] = th[k + 1] / (1.0 - t0);
  return g;
}

namespace {

// p(z) = (xi - z) h(z) + rem; returns h. The remainder is roundoff when xi
// is a root of p.
CVec deflate_linear(const CVec& p, Complex xi) {
  const int d = static_cast<int>(p.size()) - 1;
  if (d < 1) return CVec::Zero(1);
  CVec h = CVec::Zero(d);
  h[d - 1] = -p[d];
  for (int k = d - 1; k >= 1; --k) h[k - 1] = xi * h[k] - p[k];
  return h;
}

}  // namespace

ClarkFrame clark_embedding(const AtomicMeasure& mu, const RationalInner& theta,
                           int N) {
  const double hres = herglotz_residual(mu, theta);
  if (hres > 1e-9)
    throw Error("IllConditionedClark",
                "theta does not match the measure (herglotz residual " +
                    std::to_string(hres) + ")");
  const int n = mu.size();

  ClarkFrame frame{mu, theta, reproducing_g(theta, N), CMat(N + 1, n),
                   CMat(), N, 0.0};

  // 1 - theta = (denom - numer)/denom, and denom - numer is proportional to
  // prod_l (xi_l - z); cancel the Cauchy-kernel pole at xi_j symbolically.
  CVec dmn = -theta.numer;
  if (theta.denom.size() > dmn.size()) {
    CVec tmp = CVec::Zero(theta.denom.size());
    tmp.head(dmn.size()) = dmn;
    dmn = tmp;
  }
  dmn.head(theta.denom.size()) += theta.denom;
  for (int j = 0; j < n; ++j) {
    const Complex xi = mu.xi(j);
    const CVec hj = deflate_linear(dmn, xi);
    const Complex scale = xi * std::sqrt(mu.atoms()[j].weight);
    frame.omega.col(j) = poly::series_div(scale * hj, theta.denom, N);
  }

  const CMat gram = linalg::adj_prod(frame.omega, frame.omega);
  frame.gram_deviation = linalg::norm2(gram - CMat::Identity(n, n));
  // 100x the documented fixture envelope at N = 512; the columns decay
  // geometrically, so anything larger signals a broken construction
  // rather than plain truncation.
  if (frame.gram_deviation > 1e-4)
    throw Error("IllConditionedClark",
                "Gram deviation " + std::to_string(frame.gram_deviation));
  frame.clark_unitary = clark_unitary_direct(frame);
  return frame;
}

CMat clark_unitary_direct(const ClarkFrame& frame) {
  const int N = frame.truncation;
  const CVec th = frame.theta.taylor(N);
  CVec one_minus_theta = -th;
  one_minus_theta[0] += 1.0;

  // Shift omega down one row, then add the rank-one correction.
  CMat shifted = CMat::Zero(N + 1, frame.omega.cols());
  shifted.bottomRows(N) = frame.omega.topRows(N);
  const Eigen::RowVectorXcd grow =
      frame.g.adjoint() * frame.omega;  // (omega_j, g)
  shifted += one_minus_theta * grow;
  return linalg::adj_prod(frame.omega, shifted);
}

CVec project_plus(const CVec& f, int N) {
  CVec r = f;
  r.head(N).setZero();
  return r;
}

CVec project_minus(const CVec& f, int N) {
  CVec r = f;
  r.tail(N + 1).setZero();
  return r;
}

CVec project_model(const CVec& u, const CVec& f) {
  const int N = static_cast<int>(f.size()) - 1;
  // (conj(u) f)_i for i >= 0: sum_j conj(u_{j-i}) f_j.
  CVec plus = CVec::Zero(N + 1);
  for (int i = 0; i <= N; ++i) {
    Complex s = 0.0;
    const int jmax = std::min<int>(N, i + static_cast<int>(u.size()) - 1);
    for (int j = i; j <= jmax; ++j) s += std::conj(u[j - i]) * f[j];
    plus[i] = s;
  }
  return f - poly::conv_trunc(u, plus, N);
}

}  // namespace coshift
