#include "coshift/inner.hpp"

#include <algorithm>
#include <cmath>

#include "coshift/poly.hpp"

namespace coshift {

namespace {
constexpr double kBoundaryTol = 1e-10;
constexpr double kAtomTol = 1e-8;
constexpr double kHerglotzTol = 1e-9;
}  // namespace

Complex RationalInner::eval(Complex z) const {
  if (std::abs(z) > 1.0 + 1e-12)
    throw Error("OutsideDisc", "evaluation point outside the closed disc");
  return poly::eval(numer, z) / poly::eval(denom, z);
}

Complex RationalInner::at_one() const {
  const Complex d = poly::eval(denom, 1.0);
  if (std::abs(d) < 1e-12)
    throw Error("DegenerateAtOne", "denominator vanishes at 1");
  return poly::eval(numer, 1.0) / d;
}

CVec RationalInner::taylor(int N) const {
  return poly::series_div(numer, denom, N);
}

RationalInner RationalInner::constant(Complex c) {
  RationalInner r;
  r.numer = CVec::Constant(1, c);
  r.denom = CVec::Constant(1, Complex(1.0));
  r.degree = 0;
  return r;
}

Complex eval_inner(const RationalInner& theta, Complex z) {
  return theta.eval(z);
}

Complex boundary_value_at_one(const RationalInner& theta) {
  return theta.at_one();
}

Complex herglotz_transform(const AtomicMeasure& mu, Complex z) {
  Complex s = 0.0;
  for (int j = 0; j < mu.size(); ++j) {
    const Complex xi = mu.xi(j);
    s += mu.atoms()[j].weight * (xi + z) / (xi - z);
  }
  return s;
}

double herglotz_residual(const AtomicMeasure& mu, const RationalInner& theta) {
  // Interior sample ring away from both the atoms and the origin.
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) {
    const Complex z = std::polar(0.7, kTwoPi * (k + 0.37) / 64.0);
    const Complex th = theta.eval(z);
    const Complex lhs = (1.0 + th) / (1.0 - th);
    worst = std::max(worst, std::abs(lhs - herglotz_transform(mu, z)));
  }
  return worst;
}

InnerCheck verify_inner(const RationalInner& theta, const AtomicMeasure* mu) {
  InnerCheck c{0.0, 0.0, 0.0};
  for (int k = 0; k < 256; ++k) {
    const Complex z = std::polar(1.0, kTwoPi * k / 256.0);
    c.boundary_unimodularity =
        std::max(c.boundary_unimodularity, std::abs(std::abs(theta.eval(z)) - 1.0));
  }
  for (int k = 0; k < 128; ++k) {
    const Complex z = std::polar(0.99, kTwoPi * k / 128.0);
    c.disc_bound_excess =
        std::max(c.disc_bound_excess, std::abs(theta.eval(z)) - 1.0);
  }
  c.disc_bound_excess = std::max(c.disc_bound_excess, 0.0);
  if (mu) {
    for (int j = 0; j < mu->size(); ++j)
      c.atom_value_deviation = std::max(
          c.atom_value_deviation, std::abs(theta.eval(mu->xi(j)) - 1.0));
  }
  return c;
}

RationalInner clark_inner(const AtomicMeasure& mu) {
  const int n = mu.size();
  CVec D = CVec::Constant(1, Complex(1.0));
  for (int j = 0; j < n; ++j) {
    CVec lin(2);
    lin << mu.xi(j), Complex(-1.0);
    D = poly::mul(D, lin);
  }
  CVec Np = CVec::Zero(n + 1);
  for (int j = 0; j < n; ++j) {
    CVec pj = CVec::Constant(1, Complex(1.0));
    for (int l = 0; l < n; ++l) {
      if (l == j) continue;
      CVec lin(2);
      lin << mu.xi(l), Complex(-1.0);
      pj = poly::mul(pj, lin);
    }
    CVec front(2);
    front << mu.xi(j), Complex(1.0);
    const CVec term = poly::mul(front, pj);
    Np.head(term.size()) += mu.atoms()[j].weight * term;
  }

  CVec num = Np;
  CVec den = Np;
  num.head(D.size()) -= D;
  den.head(D.size()) += D;
  const Complex scale = den[0];  // = (1 + mass) * prod xi_j, never zero
  RationalInner theta;
  theta.numer = poly::trim(num / scale);
  theta.denom = poly::trim(den / scale);
  theta.degree = n;

  const InnerCheck chk = verify_inner(theta, &mu);
  const double hres = herglotz_residual(mu, theta);
  if (chk.boundary_unimodularity > kBoundaryTol ||
      chk.disc_bound_excess > kBoundaryTol || chk.atom_value_deviation > kAtomTol ||
      hres > kHerglotzTol)
    throw Error("IllConditionedClark",
                "construction failed verification (herglotz " +
                    std::to_string(hres) + ")");
  return theta;
}

SingularInnerFlow phi_coeffs(double t, int N) {
  if (t < 0.0) throw Error("NegativeTime", "t must be nonnegative");
  SingularInnerFlow flow;
  flow.t = t;
  flow.coeffs = CVec::Zero(N + 1);
  const double et = std::exp(-t);
  flow.coeffs[0] = et;
  if (N == 0 || t == 0.0) return flow;
  const double x = 2.0 * t;
  double lprev = 1.0;      // L_0(x)
  double lcur = 1.0 - x;   // L_1(x)
  flow.coeffs[1] = et * (lcur - lprev);
  for (int n = 1; n < N; ++n) {
    const double lnext = ((2.0 * n + 1.0 - x) * lcur - n * lprev) / (n + 1.0);
    flow.coeffs[n + 1] = et * (lnext - lcur);
    lprev = lcur;
    lcur = lnext;
  }
  return flow;
}

Complex phi_eval(double t, Complex z) {
  return std::exp(t * (z + 1.0) / (z - 1.0));
}

RationalInner product_inner(const std::vector<RationalInner>& thetas,
                            int degree_cap) {
  if (thetas.empty()) throw Error("EmptyProduct", "need at least one factor");
  int total = 0;
  for (const auto& th : thetas) total += th.degree;
  if (total > degree_cap)
    throw Error("DegreeCapExceeded", "product degree " + std::to_string(total) +
                                         " exceeds cap " +
                                         std::to_string(degree_cap));
  RationalInner r = thetas.front();
  for (size_t k = 1; k < thetas.size(); ++k) {
    r.numer = poly::mul(r.numer, thetas[k].numer);
    r.denom = poly::mul(r.denom, thetas[k].denom);
    r.degree += thetas[k].degree;
  }
  r.numer = poly::trim(r.numer);
  r.denom = poly::trim(r.denom);
  const InnerCheck chk = verify_inner(r);
  if (chk.boundary_unimodularity > kBoundaryTol * 10 ||
      chk.disc_bound_excess > kBoundaryTol * 10)
    throw Error("IllConditionedClark", "product lost inner-function accuracy");
  return r;
}

std::vector<RationalInner> partial_products(
    const std::vector<RationalInner>& thetas, int degree_cap) {
  std::vector<RationalInner> hats;
  hats.push_back(RationalInner::constant(1.0));
  for (size_t n = 0; n < thetas.size(); ++n) {
    std::vector<RationalInner> head(thetas.begin(), thetas.begin() + n + 1);
    hats.push_back(product_inner(head, degree_cap));
  }
  return hats;
}

}  // namespace coshift
