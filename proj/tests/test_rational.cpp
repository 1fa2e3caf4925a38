#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spoa/rational.hpp"

using namespace spoa;

TEST_CASE("parse fractions and integers") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK(parse_rational("3/-4") == Rational(-3, 4));
    CHECK(parse_rational("42") == 42);
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational(" 5 ") == 5);
    CHECK(parse_rational("0") == 0);
}

TEST_CASE("parse decimals exactly") {
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-0.1") == Rational(-1, 10));
    CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
    CHECK(parse_rational("2.5e2") == 250);
    CHECK(parse_rational("1e3") == 1000);
    CHECK(parse_rational(".5") == Rational(1, 2));
    CHECK(parse_rational("5.") == 5);
}

TEST_CASE("parse rejects garbage") {
    CHECK_THROWS_AS(parse_rational(""), ValidationError);
    CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1e"), ValidationError);
    CHECK_THROWS_AS(parse_rational("."), ValidationError);
}

TEST_CASE("fraction strings are canonical") {
    CHECK(fraction_string(Rational(1, 2)) == "1/2");
    CHECK(fraction_string(Rational(2, 4)) == "1/2");
    CHECK(fraction_string(Rational(4, 2)) == "2");
    CHECK(fraction_string(Rational(0)) == "0");
    CHECK(fraction_string(Rational(-3, 9)) == "-1/3");
}

TEST_CASE("decimal strings round to significant digits") {
    CHECK(decimal_string(Rational(1, 2)) == "0.500000000000");
    CHECK(decimal_string(Rational(1)) == "1.00000000000");
    CHECK(decimal_string(Rational(1, 3)) == "0.333333333333");
    CHECK(decimal_string(Rational(2, 3)) == "0.666666666667");
    CHECK(decimal_string(Rational(0)) == "0");
    CHECK(decimal_string(Rational(-1, 8)) == "-0.125000000000");
    CHECK(decimal_string(Rational(Integer("1999999999999"), Integer("1000000000000"))) == "2.00000000000");
    CHECK(decimal_string(Rational(1, 2), 3) == "0.500");
    CHECK(decimal_string(Rational(123456, 1)) == "123456.000000");
    CHECK(decimal_string(Rational(1, 10000)) == "0.000100000000000");
    CHECK(decimal_string(Rational(1, 10000000)) == "1.00000000000e-7");
    CHECK(decimal_string(Rational(Integer("1000000000000000000000"))) == "1.00000000000e21");
}

TEST_CASE("parse and format round-trip") {
    for (int num = -20; num <= 20; ++num)
        for (int den = 1; den <= 9; ++den) {
            Rational r(num, den);
            r.canonicalize();
            CHECK(parse_rational(fraction_string(r)) == r);
        }
}
