#include "coshift/poly.hpp"

#include <algorithm>

namespace coshift::poly {

CVec mul(const CVec& a, const CVec& b) {
  CVec c = CVec::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Complex eval(const CVec& a, Complex z) {
  Complex r = 0.0;
  for (Eigen::Index i = a.size() - 1; i >= 0; --i) r = r * z + a[i];
  return r;
}

CVec series_div(const CVec& num, const CVec& den, int N) {
  CVec c = CVec::Zero(N + 1);
  for (int k = 0; k <= N; ++k) {
    Complex s = k < num.size() ? num[k] : Complex(0.0);
    const int jmax = std::min<int>(k, static_cast<int>(den.size()) - 1);
    for (int j = 1; j <= jmax; ++j) s -= den[j] * c[k - j];
    c[k] = s / den[0];
  }
  return c;
}

CVec conv_trunc(const CVec& a, const CVec& b, int N) {
  CVec c = CVec::Zero(N + 1);
  for (Eigen::Index i = 0; i < a.size() && i <= N; ++i) {
    const Eigen::Index jmax = std::min<Eigen::Index>(b.size() - 1, N - i);
    for (Eigen::Index j = 0; j <= jmax; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

CVec deflate_at_one(const CVec& p, Complex* rem) {
  // p(z) = (z - 1) q(z) + r via synthetic division at z = 1.
  const Eigen::Index n = p.size();
  if (n <= 1) {
    if (rem) *rem = n == 1 ? p[0] : Complex(0.0);
    return CVec::Zero(1);
  }
  CVec q = CVec::Zero(n - 1);
  Complex carry = p[n - 1];
  for (Eigen::Index k = n - 2; k >= 0; --k) {
    q[k] = carry;
    carry = p[k] + carry;
  }
  if (rem) *rem = carry;
  return q;
}

CVec trim(const CVec& p, double tol) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) mx = std::max(mx, std::abs(p[i]));
  Eigen::Index last = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (std::abs(p[i]) > tol * mx) last = i;
  return p.head(last + 1);
}

}  // namespace coshift::poly
