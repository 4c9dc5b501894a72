#include <doctest.h>

#include "nhbell/presets.hpp"
#include "nhbell/serialization.hpp"
#include "test_support.hpp"

using namespace nhbell;

TEST_CASE("polynomial JSON round trip") {
  SplitMix64 rng(61);
  for (int i = 0; i < 100; ++i) {
    BellPolynomial p = testing::random_polynomial(rng, 2 + (i % 2));
    if (i % 3 == 0) p = p.with_bound(testing::random_rational(rng));
    BellPolynomial back = polynomial_from_json(to_json(p));
    CHECK(back == p);
    CHECK((back.bound().has_value() == p.bound().has_value()));
    if (p.bound()) CHECK(*back.bound() == *p.bound());
  }
}

TEST_CASE("polynomial JSON shape") {
  Json j = to_json(chsh(1));
  CHECK(j["arity"] == 2);
  CHECK(j["bound"] == "2");
  REQUIRE(j["terms"].is_array());
  CHECK(j["terms"].size() == 4);
  const Json& first = j["terms"][0];
  CHECK(first.contains("A"));
  CHECK(first.contains("B"));
  CHECK(first.contains("C"));
  CHECK(first.contains("coeff"));
  CHECK(first["C"] == 0);
}

TEST_CASE("serialization is byte stable") {
  std::string a = to_json(preset_pi5()).dump(2);
  std::string b = to_json(preset_pi5()).dump(2);
  CHECK(a == b);
  std::string qa = to_json(preset_pi5_probability()).dump(2);
  std::string qb = to_json(preset_pi5_probability()).dump(2);
  CHECK(qa == qb);
}

TEST_CASE("parse diagnostics") {
  CHECK_THROWS_AS(polynomial_from_json(Json::parse(R"({"terms": []})")),
                  ParseError);
  CHECK_THROWS_AS(polynomial_from_json(Json::parse(R"({"arity": 5, "terms": []})")),
                  ParseError);
  CHECK_THROWS_AS(
      polynomial_from_json(Json::parse(
          R"({"arity": 2, "terms": [{"A": 1, "B": 0, "C": 1, "coeff": "1"}]})")),
      ParseError);
  CHECK_THROWS_AS(
      polynomial_from_json(Json::parse(
          R"({"arity": 2, "terms": [{"A": 1, "B": 0, "C": 0, "coeff": "x"}]})")),
      ParseError);
  CHECK_THROWS_AS(
      probability_form_from_json(Json::parse(R"({"arity": 3, "terms": []})")),
      ParseError);
  CHECK_THROWS_AS(
      probability_form_from_json(Json::parse(
          R"({"arity": 3, "K": "0", "terms": [{"A":0,"B":0,"C":0,"coeff":"1"}]})")),
      ParseError);
}

TEST_CASE("probability form JSON round trip with catalog name") {
  ProbabilityForm q = preset_pi5_probability();
  Json j = to_json(q, std::string("pi5"));
  CHECK(j["name"] == "pi5");
  CHECK(j["K"] == "0");
  ProbabilityForm back = probability_form_from_json(j);
  CHECK(back == q);
}

TEST_CASE("lhv result JSON") {
  auto res = vertex_max(chsh(1));
  Json j = to_json(res);
  CHECK(j["max"] == "2");
  CHECK(j["vertices"] == 16);
  CHECK(j["witness"]["a1"] == 1);
  CHECK(j["witness"]["b2"] == -1);
  CHECK_FALSE(j["witness"].contains("c1"));
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-13") == -13);
  CHECK(parse_rational("+2/6") == Rational(1, 3));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("two"), std::invalid_argument);
}
