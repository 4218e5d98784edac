#include "coshift/linalg.hpp"

#include <algorithm>

#define LAPACK_COMPLEX_CPP
#include <cblas.h>
#include <lapacke.h>

#include <Eigen/QR>

namespace coshift::linalg {

namespace {
const Complex kOne{1.0, 0.0};
const Complex kZero{0.0, 0.0};
}  // namespace

CMat mat_prod(const CMat& a, const CMat& b) {
  CMat c(a.rows(), b.cols());
  if (c.size() == 0) return c;
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans,
              static_cast<int>(a.rows()), static_cast<int>(b.cols()),
              static_cast<int>(a.cols()), &kOne, a.data(),
              static_cast<int>(a.rows()), b.data(), static_cast<int>(b.rows()),
              &kZero, c.data(), static_cast<int>(c.rows()));
  return c;
}

CMat adj_prod(const CMat& a, const CMat& b) {
  CMat c(a.cols(), b.cols());
  if (c.size() == 0) return c;
  cblas_zgemm(CblasColMajor, CblasConjTrans, CblasNoTrans,
              static_cast<int>(a.cols()), static_cast<int>(b.cols()),
              static_cast<int>(a.rows()), &kOne, a.data(),
              static_cast<int>(a.rows()), b.data(), static_cast<int>(b.rows()),
              &kZero, c.data(), static_cast<int>(c.rows()));
  return c;
}

RVec singular_values(const CMat& a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (m == 0 || n == 0) return RVec();
  CMat work = a;  // zgesdd destroys its input
  RVec s(std::min(m, n));
  const int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'N', m, n,
      reinterpret_cast<lapack_complex_double*>(work.data()), m, s.data(),
      nullptr, 1, nullptr, 1);
  if (info != 0) throw Error("SvdFailed", "zgesdd info=" + std::to_string(info));
  return s;
}

double norm2(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)[0];
}

CMat range_basis(const CMat& a, double rank_tol) {
  Eigen::ColPivHouseholderQR<CMat> qr(a);
  const Eigen::Index k = std::min(a.rows(), a.cols());
  const auto& rdiag = qr.matrixR();
  const double top = std::abs(rdiag(0, 0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    if (std::abs(rdiag(i, i)) > rank_tol * top) rank = i + 1;
  CMat q = qr.householderQ() * CMat::Identity(a.rows(), rank);
  return q;
}

double principal_angle_sin(const CMat& q1, const CMat& q2) {
  const RVec s = singular_values(adj_prod(q1, q2));
  const double c = s.size() ? std::min(1.0, s[s.size() - 1]) : 0.0;
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace coshift::linalg
