#include <doctest.h>

#include "coshift/poly.hpp"

using namespace coshift;

TEST_SUITE_BEGIN("poly");

TEST_CASE("multiplication and evaluation") {
  CVec a(2), b(3);
  a << Complex(1.0), Complex(0.0, 1.0);           // 1 + i z
  b << Complex(2.0), Complex(0.0), Complex(1.0);  // 2 + z^2
  const CVec c = poly::mul(a, b);
  REQUIRE(c.size() == 4);
  CHECK(std::abs(c[0] - Complex(2.0)) < 1e-15);
  CHECK(std::abs(c[1] - Complex(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(c[2] - Complex(1.0)) < 1e-15);
  CHECK(std::abs(c[3] - Complex(0.0, 1.0)) < 1e-15);
  const Complex z(0.3, -0.2);
  CHECK(std::abs(poly::eval(c, z) - poly::eval(a, z) * poly::eval(b, z)) < 1e-14);
}

TEST_CASE("series division reproduces the rational value") {
  CVec num(2), den(3);
  num << Complex(1.0), Complex(-0.5, 0.25);
  den << Complex(1.0), Complex(0.2, -0.1), Complex(0.05);
  const CVec s = poly::series_div(num, den, 40);
  const Complex z(0.4, 0.3);
  Complex partial = 0.0;
  Complex zp = 1.0;
  for (int k = 0; k <= 40; ++k, zp *= z) partial += s[k] * zp;
  CHECK(std::abs(partial - poly::eval(num, z) / poly::eval(den, z)) < 1e-12);
}

TEST_CASE("deflation at one") {
  // (z - 1)(z + 2) = z^2 + z - 2
  CVec p(3);
  p << Complex(-2.0), Complex(1.0), Complex(1.0);
  Complex rem;
  const CVec q = poly::deflate_at_one(p, &rem);
  CHECK(std::abs(rem) < 1e-15);
  REQUIRE(q.size() == 2);
  CHECK(std::abs(q[0] - Complex(2.0)) < 1e-15);
  CHECK(std::abs(q[1] - Complex(1.0)) < 1e-15);
}

TEST_CASE("trim strips trailing noise") {
  CVec p(4);
  p << Complex(1.0), Complex(2.0), Complex(1e-18), Complex(0.0);
  CHECK(poly::trim(p).size() == 2);
}

TEST_SUITE_END();
