#include <doctest.h>

#include "redfrac/certified.hpp"

using namespace redfrac;
using namespace redfrac::certified;

TEST_SUITE_BEGIN("certified");

TEST_CASE("rational helpers") {
  CHECK(parse_rat("3/4") == make_rat(3, 4));
  CHECK(parse_rat("-6/8") == make_rat(-3, 4));
  CHECK(parse_rat("5") == Rat(5));
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("abc"), std::invalid_argument);
  CHECK(rat_str(make_rat(4, 6)) == "2/3");
  CHECK(rat_str(Rat(7)) == "7/1");

  CHECK(rat_pow(make_rat(2, 3), 3) == make_rat(8, 27));
  CHECK(rat_pow(Rat(5), 0) == 1);

  CHECK(floor_rat(make_rat(7, 2)) == 3);
  CHECK(floor_rat(make_rat(-7, 2)) == -4);
  CHECK(ceil_rat(make_rat(7, 2)) == 4);

  CHECK(rat_decimal(make_rat(1, 3), 4, false) == "0.3333");
  CHECK(rat_decimal(make_rat(1, 3), 4, true) == "0.3334");
  CHECK(rat_decimal(make_rat(-1, 3), 2, false) == "-0.34");
}

TEST_CASE("enclosure arithmetic is exact on endpoints") {
  Enclosure a(make_rat(1, 3), make_rat(1, 2));
  Enclosure b(make_rat(-1, 4), make_rat(1, 4));
  Enclosure s = a + b;
  CHECK(s.lo == make_rat(1, 12));
  CHECK(s.hi == make_rat(3, 4));
  Enclosure p = a * b;
  CHECK(p.lo == make_rat(-1, 8));
  CHECK(p.hi == make_rat(1, 8));
  CHECK_THROWS_AS(a / b, std::domain_error);

  Enclosure inv = enc_ipow(a, -2);
  CHECK(inv.lo == 4);
  CHECK(inv.hi == 9);
}

TEST_CASE("exp and log bracket the true value") {
  // e in [2.7182, 2.7183]
  Enclosure e = enc_exp(enc_point(Rat(1)), 96);
  CHECK(e.lo > make_rat(27182, 10000));
  CHECK(e.hi < make_rat(27183, 10000));
  CHECK(e.lo < e.hi);

  Enclosure l = enc_log(enc_point(Rat(2)), 96);
  CHECK(l.lo > make_rat(6931, 10000));
  CHECK(l.hi < make_rat(6932, 10000));

  // exact cases collapse to points
  CHECK(enc_exp(enc_point(Rat(0)), 64).is_point());
  CHECK(enc_log(enc_point(Rat(1)), 64).is_point());
  CHECK(enc_log(enc_point(Rat(1)), 64).lo == 0);
}

TEST_CASE("pow with rational exponents") {
  // 2^(1/2) in [1.41421, 1.41422]
  Enclosure r = enc_pow(enc_point(Rat(2)), make_rat(1, 2), 128);
  CHECK(r.lo > make_rat(141421, 100000));
  CHECK(r.hi < make_rat(141422, 100000));
  // integer exponents stay rational
  CHECK(enc_pow(enc_point(make_rat(2, 3)), Rat(2), 64).is_point());
  CHECK(enc_pow(enc_point(make_rat(2, 3)), Rat(2), 64).lo == make_rat(4, 9));
  CHECK(enc_pow(enc_point(Rat(5)), Rat(-1), 64).lo == make_rat(1, 5));
}

TEST_CASE("comparison escalates until decided") {
  EncFn sqrt2 = [](int prec) { return enc_pow(enc_point(Rat(2)), make_rat(1, 2), prec); };
  CHECK(compare(sqrt2, make_rat(141421356, 100000000)) > 0);
  CHECK(compare(sqrt2, make_rat(141421357, 100000000)) < 0);
  CHECK(compare(enc_const(make_rat(1, 3)), make_rat(1, 3)) == 0);

  // two routes to the same irrational value stay consistent
  EncFn lhs = [](int prec) { return enc_exp(enc_log(enc_point(Rat(7)), prec), prec); };
  CHECK(compare(lhs, Rat(7) + make_rat(1, 1000000)) < 0);
  CHECK(compare(lhs, Rat(7) - make_rat(1, 1000000)) > 0);
}

TEST_CASE("refine_relative reaches the requested width") {
  EncFn sqrt2 = [](int prec) { return enc_pow(enc_point(Rat(2)), make_rat(1, 2), prec); };
  Enclosure e = refine_relative(sqrt2, 40);
  CHECK(e.width() <= e.lo / rat_pow(Rat(2), 40));
  CHECK(e.lo * e.lo <= 2);
  CHECK(e.hi * e.hi >= 2);
}

TEST_SUITE_END();
