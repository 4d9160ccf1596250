#include <doctest.h>

#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvreal/errors.hpp"
#include "curvreal/serialize.hpp"
#include "curvreal/verify.hpp"
#include "helpers.hpp"

using curvreal::ChristoffelField;
using curvreal::Jet;
using curvreal::ModelDocument;
using curvreal::Rational;
using nlohmann::json;

namespace {

json minimal_model() {
  return json::parse(R"({
    "format_version": 1,
    "kind": "model",
    "dim": 3,
    "signature": [0, 3],
    "options": {"order": 4, "seed": 9},
    "operator": [
      {"indices": [1, 2, 1, 2], "value": "1"},
      {"indices": [2, 1, 1, 2], "value": "-1"}
    ],
    "metric": {"constant": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}
  })");
}

}  // namespace

TEST_SUITE_BEGIN("serialize");

TEST_CASE("jets round-trip through their term-list form") {
  testutil::Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Jet jet = testutil::random_jet(rng, 3, 4, 0, 4, 8);
    const Jet back = curvreal::jet_from_json(curvreal::jet_to_json(jet), 3, 4);
    CHECK(back == jet);
  }
  CHECK_THROWS_AS(curvreal::jet_from_json(json::parse(R"([{"exponents": [5, 0, 0],
                  "coeff": "1"}])"), 3, 4),
                  curvreal::ValidationError);
  CHECK_THROWS_AS(curvreal::jet_from_json(json::parse(R"([{"exponents": [1, 0],
                  "coeff": "1"}])"), 3, 4),
                  curvreal::ValidationError);
  CHECK_THROWS_AS(curvreal::jet_from_json(json::parse(R"([{"exponents": [1, 0, 0],
                  "coeff": "1/0"}])"), 3, 4),
                  curvreal::ValidationError);
}

TEST_CASE("model documents load, validate, and round-trip") {
  const ModelDocument model = curvreal::load_model(minimal_model());
  CHECK(model.order == 4);
  CHECK(model.seed == 9);
  CHECK(model.metric.dim() == 3);
  CHECK(model.metric.degree_cap() == 5);
  CHECK(model.op(0, 1, 0, 1) == Rational(1));

  const ModelDocument back = curvreal::load_model(curvreal::model_to_json(model));
  CHECK(back.op == model.op);
  CHECK(back.metric == model.metric);
  CHECK(back.order == model.order);
  CHECK(back.seed == model.seed);
}

TEST_CASE("model loader rejects structural mistakes with clear errors") {
  auto expect_rejected = [](json doc) {
    CHECK_THROWS_AS(curvreal::load_model(doc), curvreal::ValidationError);
  };

  json wrong_kind = minimal_model();
  wrong_kind["kind"] = "connection";
  expect_rejected(wrong_kind);

  json missing = minimal_model();
  missing.erase("operator");
  expect_rejected(missing);

  json bad_signature = minimal_model();
  bad_signature["signature"] = {1, 3};
  expect_rejected(bad_signature);

  json asymmetric = minimal_model();
  asymmetric["operator"] = json::array({json{{"indices", {1, 2, 1, 2}}, {"value", "1"}}});
  expect_rejected(asymmetric);  // violates the curvature symmetries

  json duplicate = minimal_model();
  duplicate["operator"].push_back(duplicate["operator"][0]);
  expect_rejected(duplicate);

  json out_of_range = minimal_model();
  out_of_range["operator"][0]["indices"] = {0, 2, 1, 2};
  expect_rejected(out_of_range);

  json bad_order = minimal_model();
  bad_order["options"]["order"] = 1;
  expect_rejected(bad_order);

  json bad_rational = minimal_model();
  bad_rational["operator"][0]["value"] = "0.5";
  expect_rejected(bad_rational);

  json wrong_metric = minimal_model();
  wrong_metric["metric"]["constant"][0][0] = "0";
  expect_rejected(wrong_metric);  // degenerate at the origin
}

TEST_CASE("metric entries form loads jets and enforces symmetry") {
  json doc = minimal_model();
  doc["metric"] = json{{"entries", json::array()}};
  for (int i = 1; i <= 3; ++i) {
    doc["metric"]["entries"].push_back(
        json{{"i", i},
             {"j", i},
             {"jet", json::array({json{{"exponents", {0, 0, 0}}, {"coeff", "1"}}})}});
  }
  doc["metric"]["entries"].push_back(
      json{{"i", 1},
           {"j", 2},
           {"jet", json::array({json{{"exponents", {1, 0, 0}}, {"coeff", "1/2"}}})}});
  const ModelDocument model = curvreal::load_model(doc);
  CHECK(model.metric(0, 1) == model.metric(1, 0));
  CHECK(model.metric(0, 1).coefficient(std::vector<int>{1, 0, 0}) == Rational(1, 2));

  // Giving both (i,j) and (j,i) with different jets is a contradiction.
  doc["metric"]["entries"].push_back(
      json{{"i", 2},
           {"j", 1},
           {"jet", json::array({json{{"exponents", {1, 0, 0}}, {"coeff", "1/3"}}})}});
  CHECK_THROWS_AS(curvreal::load_model(doc), curvreal::ValidationError);
}

TEST_CASE("connection documents round-trip and validate") {
  ChristoffelField gamma(3, 5);
  const Jet x1 = Jet::variable(3, 5, 0);
  gamma.set_symmetric_pair(0, 1, 1, Rational(1, 3) * x1);
  gamma.set_symmetric_pair(0, 0, 1, Rational(-2, 3) * Jet::variable(3, 5, 1));

  const json doc = curvreal::christoffel_to_json(gamma);
  CHECK(doc.at("kind") == "christoffel");
  const ChristoffelField back = curvreal::load_christoffel(doc);
  CHECK(back == gamma);

  json tampered = doc;
  tampered["entries"].push_back(tampered["entries"][0]);
  CHECK_THROWS_AS(curvreal::load_christoffel(tampered), curvreal::ValidationError);

  json bad_dim = doc;
  bad_dim["dim"] = 9;
  CHECK_THROWS_AS(curvreal::load_christoffel(bad_dim), curvreal::ValidationError);

  // Mirrored lower indices carrying different jets break torsion freedom.
  json asymmetric = doc;
  json mirrored = asymmetric["entries"][1];
  REQUIRE(mirrored["lower"] == json::array({1, 2}));
  mirrored["lower"] = {2, 1};
  mirrored["jet"][0]["coeff"] = "7/2";
  asymmetric["entries"].push_back(std::move(mirrored));
  CHECK_THROWS_AS(curvreal::load_christoffel(asymmetric), curvreal::ValidationError);
}

TEST_CASE("canonical dumps are deterministic, sorted, and newline-terminated") {
  const json doc = curvreal::model_to_json(curvreal::load_model(minimal_model()));
  const std::string once = curvreal::dump_canonical(doc);
  const std::string twice = curvreal::dump_canonical(doc);
  CHECK(once == twice);
  CHECK(!once.empty());
  CHECK(once.back() == '\n');
  CHECK(once.find("\"dim\"") < once.find("\"kind\""));
  CHECK(once.find("\"kind\"") < once.find("\"metric\""));
}

TEST_CASE("verdict and report serialization carry the witness structure") {
  curvreal::Verdict verdict;
  verdict.name = "demo";
  verdict.pass = false;
  verdict.verified_degree = 3;
  curvreal::CoefficientWitness witness;
  witness.component = {1, 2};
  witness.exponents = {2, 0, 0};
  witness.expected = "0";
  witness.got = "-1/9";
  verdict.witness = witness;
  verdict.notes["context"] = "unit test";

  const json out = curvreal::verdict_to_json(verdict);
  CHECK(out.at("pass") == false);
  CHECK(out.at("witness").at("component") == json::array({1, 2}));
  CHECK(out.at("witness").at("got") == "-1/9");
  CHECK(out.at("notes").at("context") == "unit test");

  curvreal::Verdict passing;
  passing.name = "ok";
  passing.pass = true;
  passing.verified_degree = 0;
  const json out2 = curvreal::verdict_to_json(passing);
  CHECK(out2.at("witness").is_null());

  const json verification = curvreal::verification_to_json(3, 4, {verdict, passing});
  CHECK(verification.at("kind") == "verification");
  CHECK(verification.at("pass") == false);
  CHECK(verification.at("verdicts").size() == 2);
}

TEST_CASE("infinite valuations serialize as the string inf") {
  curvreal::RealizationReport report;
  report.dim = 3;
  report.order = 4;
  report.signature = {0, 3};
  curvreal::IterationSummary final_step;
  final_step.nu = 2;
  final_step.defect_valuation = curvreal::kValuationInfinity;
  final_step.decay_order = 4;
  final_step.defect_norm_sample = Rational(0);
  report.iterations.push_back(final_step);
  report.converged = true;
  report.iterations_used = 2;

  const json out = curvreal::report_to_json(report);
  CHECK(out.at("iterations")[0].at("defect_valuation") == "inf");
  CHECK(out.at("iterations")[0].at("decay_order") == 4);
}

TEST_SUITE_END();
