/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <string>

#include <doctest.h>

#include "qcrb/models.hpp"

using namespace qcrb::models;
using qcrb::numlin::Matrix;

TEST_CASE("builtin flip model") {
  const auto m = builtin_flip();
  CHECK(m.name == "flip");
  CHECK(m.dim == 2);
  CHECK(m.theta_min == 0.0);
  CHECK(m.theta_max == 1.0);
  CHECK(m.eigencurve_source == EigencurveSource::Analytic);

  const auto rho = m.rho_at(0.3);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(std::abs(rho.matrix()(0, 1)) == doctest::Approx(0.0));

  const auto drho = m.drho_at(0.3);
  CHECK(drho.matrix()(0, 0).real() == doctest::Approx(-1.0));
  CHECK(drho.matrix()(1, 1).real() == doctest::Approx(1.0));

  CHECK(m.in_domain(0.0));
  CHECK(m.in_domain(1.0));
  CHECK_FALSE(m.in_domain(-0.01));
  CHECK_THROWS_AS(m.require_in_domain(1.01), std::domain_error);

  const auto curves = eigencurves(m, 0.3);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].value == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(curves[0].d1 == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(curves[0].d2 == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(curves[1].value == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(curves[1].d1 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("builtin trig model") {
  const auto m = builtin_trig();
  CHECK(m.name == "trig");
  CHECK(m.theta_min == 0.0);
  CHECK(m.theta_max == doctest::Approx(M_PI / 2));

  const double t = 0.4;
  const auto rho = m.rho_at(t);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(std::cos(t) * std::cos(t)).epsilon(1e-15));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(std::sin(t) * std::sin(t)).epsilon(1e-15));

  const auto drho = m.drho_at(t);
  CHECK(drho.matrix()(0, 0).real() == doctest::Approx(-std::sin(2 * t)).epsilon(1e-14));
  CHECK(drho.matrix()(1, 1).real() == doctest::Approx(std::sin(2 * t)).epsilon(1e-14));

  // Analytic curves: lambda'' of cos^2 is -2 cos(2 theta).
  const auto curves = eigencurves(m, t);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].value == doctest::Approx(std::cos(t) * std::cos(t)).epsilon(1e-14));
  CHECK(curves[0].d1 == doctest::Approx(-std::sin(2 * t)).epsilon(1e-13));
  CHECK(curves[0].d2 == doctest::Approx(-2 * std::cos(2 * t)).epsilon(1e-13));
  CHECK(curves[1].d2 == doctest::Approx(2 * std::cos(2 * t)).epsilon(1e-13));

  // Endpoint curves: at theta = 0 the sin^2 curve vanishes with d2 = 2.
  const auto at0 = eigencurves(m, 0.0);
  CHECK(at0[1].value == doctest::Approx(0.0));
  CHECK(at0[1].d1 == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(at0[1].d2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("builtin_by_name") {
  CHECK(builtin_by_name("flip").has_value());
  CHECK(builtin_by_name("trig").has_value());
  CHECK_FALSE(builtin_by_name("nope").has_value());
}

TEST_CASE("diagonal spec parsing and realization") {
  const std::string text = R"json({
    "name": "tilted",
    "dim": 2,
    "domain": [0.1, 0.9],
    "kind": "diagonal",
    "eigenvalues": ["1 - theta^2 / 2", "theta^2 / 2"]
  })json";
  const auto spec = parse_model_spec(text);
  CHECK(spec.name == "tilted");
  CHECK(spec.dim == 2);
  CHECK(spec.kind == ModelSpec::Kind::Diagonal);
  REQUIRE(spec.eigenvalues.size() == 2);

  const auto m = from_spec(spec);
  CHECK(m.eigencurve_source == EigencurveSource::Analytic);
  const double t = 0.5;
  const auto rho = m.rho_at(t);
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(t * t / 2).epsilon(1e-14));
  const auto drho = m.drho_at(t);
  CHECK(drho.matrix()(1, 1).real() == doctest::Approx(t).epsilon(1e-12));

  const auto curves = eigencurves(m, t);
  CHECK(curves[1].d2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal spec with non-normalized curves is rejected") {
  const std::string text = R"json({
    "name": "bad",
    "dim": 2,
    "domain": [0.0, 1.0],
    "kind": "diagonal",
    "eigenvalues": ["theta", "theta"]
  })json";
  CHECK_THROWS_AS(from_spec(parse_model_spec(text)), std::invalid_argument);
}

TEST_CASE("diagonal spec with negative curve is rejected") {
  const std::string text = R"json({
    "name": "neg",
    "dim": 2,
    "domain": [0.0, 1.0],
    "kind": "diagonal",
    "eigenvalues": ["1 - (theta - 0.5)", "theta - 0.5"]
  })json";
  CHECK_THROWS_AS(from_spec(parse_model_spec(text)), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected") {
  const std::string text = R"json({
    "name": "x", "dim": 2, "domain": [0, 1], "kind": "diagonal",
    "eigenvalues": ["1 - theta", "theta"], "extra": 1
  })json";
  CHECK_THROWS_AS(parse_model_spec(text), std::invalid_argument);
}

TEST_CASE("malformed JSON and schema violations are rejected") {
  CHECK_THROWS_AS(parse_model_spec("{ not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec(R"json({"name":"x","dim":0,"domain":[0,1],
    "kind":"diagonal","eigenvalues":[]})json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec(R"json({"name":"x","dim":2,"domain":[1,0],
    "kind":"diagonal","eigenvalues":["1 - theta","theta"]})json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec(R"json({"name":"x","dim":2,"domain":[0,1],
    "kind":"banana","eigenvalues":["1 - theta","theta"]})json"),
                  std::invalid_argument);
  // Eigenvalue count must match dim.
  CHECK_THROWS_AS(from_spec(parse_model_spec(R"json({"name":"x","dim":3,"domain":[0,1],
    "kind":"diagonal","eigenvalues":["1 - theta","theta"]})json")),
                  std::invalid_argument);
}

TEST_CASE("dense spec realization with numeric eigencurves") {
  // Rotating pure-state mixture: rho = 0.5 I + 0.4 (cos, sin; sin, -cos)/... kept PSD.
  const std::string text = R"json({
    "name": "rot",
    "dim": 2,
    "domain": [0.0, 1.0],
    "kind": "dense",
    "entries": [
      [ {"re": "0.5 + 0.4 * cos(theta)", "im": "0"},
        {"re": "0.4 * sin(theta)",       "im": "0"} ],
      [ {"re": "0.4 * sin(theta)",       "im": "0"},
        {"re": "0.5 - 0.4 * cos(theta)", "im": "0"} ]
    ]
  })json";
  const auto m = from_spec(parse_model_spec(text));
  CHECK(m.eigencurve_source == EigencurveSource::Numeric);

  const double t = 0.6;
  const auto rho = m.rho_at(t);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.4 * std::sin(t)).epsilon(1e-13));

  // Eigenvalues of this family are constant 0.5 +/- 0.4; numeric curves must
  // recover flat values and (near-)zero derivatives.
  const auto curves = eigencurves(m, t);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].value == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(curves[1].value == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(std::abs(curves[0].d1) < 1e-6);
  CHECK(std::abs(curves[1].d1) < 1e-6);
  CHECK(curves[0].reliable);

  // drho check against the analytic derivative of the entries.
  const auto drho = m.drho_at(t);
  CHECK(drho.matrix()(0, 0).real() == doctest::Approx(-0.4 * std::sin(t)).epsilon(1e-12));
  CHECK(drho.matrix()(0, 1).real() == doctest::Approx(0.4 * std::cos(t)).epsilon(1e-12));
}

TEST_CASE("dense spec violating positivity is rejected") {
  const std::string text = R"json({
    "name": "badrot",
    "dim": 2,
    "domain": [0.0, 1.0],
    "kind": "dense",
    "entries": [
      [ {"re": "0.5 + 0.7 * cos(theta)", "im": "0"},
        {"re": "0.7 * sin(theta)",       "im": "0"} ],
      [ {"re": "0.7 * sin(theta)",       "im": "0"},
        {"re": "0.5 - 0.7 * cos(theta)", "im": "0"} ]
    ]
  })json";
  CHECK_THROWS_AS(from_spec(parse_model_spec(text)), std::invalid_argument);
}

TEST_CASE("dense spec must be Hermitian on the grid") {
  const std::string text = R"json({
    "name": "nonherm",
    "dim": 2,
    "domain": [0.0, 1.0],
    "kind": "dense",
    "entries": [
      [ {"re": "0.6", "im": "0"}, {"re": "0.1", "im": "0"} ],
      [ {"re": "0.2", "im": "0"}, {"re": "0.4", "im": "0"} ]
    ]
  })json";
  CHECK_THROWS_AS(from_spec(parse_model_spec(text)), std::invalid_argument);
}

TEST_CASE("numeric eigencurves at a domain boundary use one-sided stencils") {
  const std::string text = R"json({
    "name": "rotb",
    "dim": 2,
    "domain": [0.0, 1.0],
    "kind": "dense",
    "entries": [
      [ {"re": "0.5 + 0.4 * cos(theta)", "im": "0"},
        {"re": "0.4 * sin(theta)",       "im": "0"} ],
      [ {"re": "0.4 * sin(theta)",       "im": "0"},
        {"re": "0.5 - 0.4 * cos(theta)", "im": "0"} ]
    ]
  })json";
  const auto m = from_spec(parse_model_spec(text));
  const auto curves = eigencurves(m, 0.0);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].value == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(std::abs(curves[0].d1) < 1e-5);
}
