#include <catch2/catch_amalgamated.hpp>

#include "qmax/series.hpp"

using namespace qmax;

namespace {

Series<Rat> sample(int which, int order) {
  Series<Rat> s(order);
  for (int k = 0; k <= order; ++k) {
    Rat r(which * 7 + 3 * k * k - 5 * k + 1, 2 + ((k + which) % 5));
    r.canonicalize();  // mpq_class(n, d) stores the raw pair
    s.at(k) = r;
  }
  return s;
}

}  // namespace

TEST_CASE("construction and access") {
  Series<Rat> s(4);
  CHECK(s.order() == 4);
  for (int k = 0; k <= 4; ++k) CHECK(s.at(k) == Rat(0));
  s.at(2) = Rat(5, 7);
  CHECK(s[2] == Rat(5, 7));
  CHECK_THROWS_AS(s.at(5), numeric_error);
  CHECK_THROWS_AS(s.at(-1), numeric_error);
  CHECK_THROWS_AS(Series<Rat>(-1), validation_error);

  const Series<Rat> m = Series<Rat>::monomial(Rat(3), 2, 4);
  CHECK(m.at(2) == Rat(3));
  CHECK(m.at(0) == Rat(0));
}

TEST_CASE("ring axioms on exact series") {
  const int N = 12;
  const Series<Rat> A = sample(1, N), B = sample(2, N), C = sample(3, N);
  const Series<Rat> one = Series<Rat>::constant(Rat(1), N);
  const Series<Rat> zero(N);

  CHECK(A + B == B + A);
  CHECK((A + B) + C == A + (B + C));
  CHECK(A + zero == A);
  CHECK(A - A == zero);
  CHECK(A * B == B * A);
  CHECK((A * B) * C == A * (B * C));
  CHECK(A * one == A);
  CHECK(A * (B + C) == A * B + A * C);
  CHECK(-(-A) == A);
}

TEST_CASE("division inverts multiplication") {
  const int N = 10;
  const Series<Rat> A = sample(4, N);
  Series<Rat> B = sample(5, N);
  B.at(0) = Rat(3, 2);  // invertible constant term
  CHECK((A * B) / B == A);
  CHECK((A / B) * B == A);

  Series<Rat> noconst = sample(6, N);
  noconst.at(0) = Rat(0);
  CHECK_THROWS_AS(A / noconst, numeric_error);
}

TEST_CASE("powers by binary exponentiation") {
  const int N = 9;
  const Series<Rat> A = sample(7, N);
  CHECK(A.pow(0) == Series<Rat>::constant(Rat(1), N));
  CHECK(A.pow(1) == A);
  CHECK(A.pow(3) == A * A * A);
  CHECK(A.pow(4) == (A * A) * (A * A));
}

TEST_CASE("mismatched truncation degrees are rejected") {
  const Series<Rat> A = sample(1, 5), B = sample(1, 6);
  CHECK_THROWS_AS(A + B, numeric_error);
  CHECK_THROWS_AS(A * B, numeric_error);
}

TEST_CASE("geometric series") {
  const Series<Rat> g = geometric_series<Rat>(6);
  const Series<Rat> one = Series<Rat>::constant(Rat(1), 6);
  const Series<Rat> lam = Series<Rat>::monomial(Rat(1), 1, 6);
  CHECK(g * (one - lam) == one);
}

TEST_CASE("truncation is a ring homomorphism on products") {
  // multiplying then reading low coefficients == multiplying lower-order views
  const int N = 8, M = 5;
  const Series<Rat> A = sample(8, N), B = sample(9, N);
  Series<Rat> Am(M), Bm(M);
  for (int k = 0; k <= M; ++k) {
    Am.at(k) = A.at(k);
    Bm.at(k) = B.at(k);
  }
  const Series<Rat> full = A * B, low = Am * Bm;
  for (int k = 0; k <= M; ++k) CHECK(full.at(k) == low.at(k));
}
