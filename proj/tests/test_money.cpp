#include "doctest.h"
#include "offsim/money.hpp"

using offsim::Money;

TEST_CASE("money rounds half to even at the third digit") {
  // 0.0625 and 0.1875 are binary-exact, so the tie is genuine.
  CHECK(Money::from_double(0.0625).millis() == 62);
  CHECK(Money::from_double(0.1875).millis() == 188);
  CHECK(Money::from_double(-0.0625).millis() == -62);
  CHECK(Money::from_double(1.2344).millis() == 1234);
  CHECK(Money::from_double(1.2346).millis() == 1235);
}

TEST_CASE("money formatting and parsing") {
  CHECK(Money::from_millis(167727).str() == "167.727");
  CHECK(Money::from_millis(-100).str() == "-0.100");
  CHECK(Money::from_millis(0).str() == "0.000");
  CHECK(Money::parse("20.000") == Money::from_millis(20000));
  CHECK(Money::parse(Money::from_millis(123456).str()).millis() == 123456);
  CHECK_THROWS_AS(Money::parse("12x"), offsim::SimError);
}

TEST_CASE("money arithmetic is exact in millis") {
  Money a = Money::from_millis(30000);
  Money b = Money::from_millis(20000);
  CHECK((a - b).millis() == 10000);
  CHECK((a + (-a)).millis() == 0);
  CHECK(a > b);
  CHECK(Money::from_double(33.333).scaled(0.6).millis() == 20000);
  CHECK(Money::from_millis(20000).scaled(0.9).millis() == 18000);
}
