#include <doctest.h>

#include <cmath>
#include <vector>

#include "coshift/inner.hpp"
#include "coshift/measures.hpp"

using namespace coshift;

namespace {

// Independent pointwise oracle: invert the Herglotz identity at z without
// touching the rational construction.
Complex clark_oracle(const AtomicMeasure& mu, Complex z) {
  const Complex h = herglotz_transform(mu, z);
  return (h - 1.0) / (h + 1.0);
}

// Coefficient oracle: DFT of samples on the circle of radius r < 1.
CVec dft_coeffs(const std::function<Complex(Complex)>& f, double r, int M,
                int N) {
  CVec c = CVec::Zero(N + 1);
  for (int j = 0; j < M; ++j) {
    const double w = kTwoPi * j / M;
    const Complex val = f(std::polar(r, w));
    for (int n = 0; n <= N; ++n)
      c[n] += val * std::polar(1.0, -n * w);
  }
  for (int n = 0; n <= N; ++n) c[n] /= M * std::pow(r, n);
  return c;
}

AtomicMeasure delta_minus_one() { return AtomicMeasure::make({{kPi, 1.0}}); }
AtomicMeasure plus_minus_i() {
  return AtomicMeasure::make({{kPi / 2, 0.5}, {3 * kPi / 2, 0.5}});
}
AtomicMeasure three_atom() {
  return AtomicMeasure::make(
      {{2 * kPi / 3, 0.2}, {kPi, 0.5}, {3 * kPi / 2, 0.3}});
}

}  // namespace

TEST_SUITE_BEGIN("inner");

TEST_CASE("clark inner closed forms") {
  const RationalInner th1 = clark_inner(delta_minus_one());
  const CVec t1 = th1.taylor(3);
  CHECK(std::abs(t1[0]) < 1e-14);
  CHECK(std::abs(t1[1] + 1.0) < 1e-14);
  CHECK(std::abs(t1[2]) < 1e-14);
  CHECK(std::abs(t1[3]) < 1e-14);
  CHECK(th1.degree == 1);

  const RationalInner th2 = clark_inner(plus_minus_i());
  const CVec t2 = th2.taylor(4);
  for (int k : {0, 1, 3, 4}) CHECK(std::abs(t2[k]) < 1e-14);
  CHECK(std::abs(t2[2] + 1.0) < 1e-14);

  // pointwise against the Herglotz-inversion oracle
  for (const auto& mu : {delta_minus_one(), plus_minus_i(), three_atom()}) {
    const RationalInner th = clark_inner(mu);
    for (int k = 0; k < 16; ++k) {
      const Complex z = std::polar(0.55, kTwoPi * (k + 0.21) / 16.0);
      CHECK(std::abs(th.eval(z) - clark_oracle(mu, z)) < 1e-12);
    }
  }
}

TEST_CASE("boundary values") {
  const RationalInner th1 = clark_inner(delta_minus_one());
  CHECK(std::abs(th1.at_one() + 1.0) < 1e-12);
  CHECK(std::abs(th1.eval(Complex(0.0)) - Complex(0.0)) < 1e-14);
  CHECK(std::abs(th1.eval(Complex(-1.0)) - 1.0) < 1e-8);  // atom value

  const RationalInner th2 = clark_inner(plus_minus_i());
  CHECK(std::abs(th2.at_one() + 1.0) < 1e-12);
  CHECK(std::abs(th2.eval(Complex(0.0, 1.0)) - 1.0) < 1e-12);

  const RationalInner th3 = clark_inner(three_atom());
  CHECK(std::abs(std::abs(th3.at_one()) - 1.0) < 1e-10);

  CHECK_THROWS_WITH_AS(th1.eval(Complex(1.5, 0.0)),
                       doctest::Contains("OutsideDisc"), Error);
}

TEST_CASE("eval_inner basics") {
  const RationalInner th2 = clark_inner(plus_minus_i());
  CHECK(std::abs(eval_inner(th2, Complex(0.0, 1.0)) - 1.0) < 1e-12);
  const RationalInner th1 = clark_inner(delta_minus_one());
  CHECK(std::abs(eval_inner(th1, Complex(0.0)) - 0.0) < 1e-14);
}

TEST_CASE("taylor coefficients, Parseval, and the tail") {
  const RationalInner th = clark_inner(three_atom());

  SUBCASE("DFT oracle agrees coefficientwise") {
    const CVec t = th.taylor(24);
    const CVec oracle = dft_coeffs(
        [&th](Complex z) { return th.eval(z); }, 0.7, 4096, 24);
    CHECK((t - oracle).norm() < 1e-10);
  }
  SUBCASE("Parseval sum reaches one at N = 512") {
    const double sum = th.taylor(512).squaredNorm();
    CHECK(sum <= 1.0 + 1e-12);
    CHECK(sum >= 1.0 - 1e-6);
  }
  SUBCASE("partial sums approximate theta on |z| = 0.9") {
    const CVec t = th.taylor(256);
    for (int k = 0; k < 8; ++k) {
      const Complex z = std::polar(0.9, kTwoPi * (k + 0.13) / 8.0);
      Complex partial = 0.0, zp = 1.0;
      for (int n = 0; n <= 256; ++n, zp *= z) partial += t[n] * zp;
      CHECK(std::abs(partial - th.eval(z)) < 1e-6);
    }
  }
}

TEST_CASE("phi coefficients") {
  SUBCASE("t = 0 is the constant one") {
    const CVec c = phi_coeffs(0.0, 8).coeffs;
    CHECK(std::abs(c[0] - 1.0) < 1e-16);
    CHECK(c.tail(8).norm() == 0.0);
  }
  SUBCASE("leading coefficients at t = 1") {
    const CVec c = phi_coeffs(1.0, 4).coeffs;
    CHECK(std::abs(c[0] - std::exp(-1.0)) < 1e-16);
    // c_1 via a contour integral of phi_t(z)/z^2 on |z| = 0.5
    Complex c1{0.0};
    const int M = 4096;
    for (int j = 0; j < M; ++j) {
      const Complex z = std::polar(0.5, kTwoPi * j / M);
      c1 += phi_eval(1.0, z) / z;
    }
    c1 /= M;
    CHECK(std::abs(c[1] - c1) < 1e-12);
    CHECK(std::abs(c[1] - Complex(-2.0 * std::exp(-1.0))) < 1e-14);
  }
  SUBCASE("DFT oracle for the first coefficients") {
    const CVec c = phi_coeffs(0.7, 30).coeffs;
    const CVec oracle = dft_coeffs(
        [](Complex z) { return phi_eval(0.7, z); }, 0.6, 8192, 30);
    CHECK((c - oracle).norm() < 1e-9);
  }
  SUBCASE("Parseval bound") {
    for (double t : {0.25, 1.0, 2.0})
      CHECK(phi_coeffs(t, 2048).coeffs.squaredNorm() <= 1.0 + 1e-12);
  }
  SUBCASE("series-level semigroup law") {
    for (double t : {0.25, 1.0}) {
      for (double s : {0.5, 2.0}) {
        const CVec a = phi_coeffs(t, 256).coeffs;
        const CVec b = phi_coeffs(s, 256).coeffs;
        CVec prod = CVec::Zero(257);
        for (int i = 0; i <= 256; ++i)
          for (int j = 0; i + j <= 256; ++j) prod[i + j] += a[i] * b[j];
        CHECK((prod - phi_coeffs(t + s, 256).coeffs).norm() < 1e-9);
      }
    }
  }
  SUBCASE("partial sums decay in envelope (radial limit zero)") {
    const CVec c = phi_coeffs(1.0, 1 << 13).coeffs;
    double prev_env = 1e300;
    Complex s = 0.0;
    int n = 0;
    for (int k = 6; k < 13; ++k) {
      double env = 0.0;
      for (; n < (1 << (k + 1)); ++n) {
        s += c[n];
        if (n >= (1 << k)) env = std::max(env, std::abs(s));
      }
      CHECK(env < prev_env * 1.05);
      prev_env = env;
    }
    CHECK(prev_env < 0.2);
  }
  SUBCASE("negative time rejected") {
    CHECK_THROWS_AS(phi_coeffs(-0.5, 4), Error);
  }
}

TEST_CASE("products of inner functions") {
  const RationalInner mz = clark_inner(delta_minus_one());   // -z
  const RationalInner mz2 = clark_inner(plus_minus_i());     // -z^2

  const RationalInner sq = product_inner({mz, mz});
  const CVec tsq = sq.taylor(3);
  CHECK(std::abs(tsq[2] - 1.0) < 1e-13);  // z^2
  CHECK(sq.degree == 2);

  const RationalInner cube = product_inner({mz, mz2});
  const CVec tc = cube.taylor(4);
  CHECK(std::abs(tc[3] - 1.0) < 1e-13);  // z^3

  const RationalInner single = product_inner({mz});
  CHECK((single.taylor(2) - mz.taylor(2)).norm() < 1e-15);

  CHECK_THROWS_WITH_AS(product_inner({mz, mz2}, 2),
                       doctest::Contains("DegreeCapExceeded"), Error);
  CHECK_THROWS_AS(product_inner({}), Error);

  const auto hats = partial_products({mz, mz2});
  REQUIRE(hats.size() == 3);
  CHECK(std::abs(hats[0].eval(Complex(0.37)) - 1.0) < 1e-15);
  CHECK(std::abs(hats[1].eval(Complex(0.37)) - mz.eval(Complex(0.37))) < 1e-15);
  CHECK(std::abs(hats[2].eval(Complex(0.37)) - cube.eval(Complex(0.37))) <
        1e-14);
}

TEST_CASE("herglotz residual is tiny for genuine clark pairs") {
  for (const auto& mu : {delta_minus_one(), plus_minus_i(), three_atom()}) {
    const RationalInner th = clark_inner(mu);
    CHECK(herglotz_residual(mu, th) < 1e-9);
    const InnerCheck chk = verify_inner(th, &mu);
    CHECK(chk.boundary_unimodularity < 1e-10);
    CHECK(chk.disc_bound_excess < 1e-10);
    CHECK(chk.atom_value_deviation < 1e-8);
  }
}

TEST_SUITE_END();
