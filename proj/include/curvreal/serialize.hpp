#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvreal/algebra.hpp"
#include "curvreal/metric.hpp"
#include "curvreal/realize.hpp"
#include "curvreal/verdict.hpp"

namespace curvreal {

// JSON document formats. Conventions shared by all documents: rationals are
// "p/q" strings (plain "p" for integers), indices are 1-based, every document
// carries format_version and kind, and emission is deterministic (sorted keys,
// canonical jet term order, two-space indent, trailing newline).

nlohmann::json jet_to_json(const Jet& jet);

// Parses a jet term list. Terms above the cap are rejected; the caller picks
// the cap, so any truncation is a visible decision at the call site.
Jet jet_from_json(const nlohmann::json& doc, int dim, int degree_cap);

struct ModelDocument {
  AlgebraicCurvatureOperator op;
  MetricField metric;  // held at degree cap order + 1
  int order = 4;
  std::uint64_t seed = 0;
  bool metric_is_constant = true;  // emitted in the compact constant-matrix form
};

// Validates everything: shapes, symmetries, signature, index ranges,
// rational literals. Throws ValidationError with a precise message.
ModelDocument load_model(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelDocument& model);

ChristoffelField load_christoffel(const nlohmann::json& doc);
nlohmann::json christoffel_to_json(const ChristoffelField& gamma);

nlohmann::json verdict_to_json(const Verdict& verdict);
nlohmann::json report_to_json(const RealizationReport& report);
nlohmann::json verification_to_json(int dim, int order, const std::vector<Verdict>& verdicts);
nlohmann::json classification_to_json(const AlgebraicCurvatureOperator& op,
                                      const InnerProduct& inner);

// Canonical text encoding used by every writer.
std::string dump_canonical(const nlohmann::json& doc);

}  // namespace curvreal
