#include "curvreal/serialize.hpp"

#include <set>
#include <tuple>
#include <utility>

#include "curvreal/errors.hpp"

namespace curvreal {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ValidationError(message); }

const json& require_field(const json& doc, const char* key, const char* context) {
  if (!doc.is_object() || !doc.contains(key)) {
    fail(std::string(context) + " is missing field \"" + key + "\"");
  }
  return doc.at(key);
}

int require_int(const json& value, const char* what) {
  if (!value.is_number_integer()) fail(std::string(what) + " must be an integer");
  return value.get<int>();
}

std::string require_string(const json& value, const char* what) {
  if (!value.is_string()) fail(std::string(what) + " must be a string");
  return value.get<std::string>();
}

void require_header(const json& doc, const char* kind) {
  const int version = require_int(require_field(doc, "format_version", "document"),
                                  "format_version");
  if (version != 1) fail("unsupported format_version " + std::to_string(version));
  const std::string got = require_string(require_field(doc, "kind", "document"), "kind");
  if (got != kind) fail("expected a \"" + std::string(kind) + "\" document, got \"" + got + "\"");
}

json rational_matrix_to_json(const BilinearForm& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

nlohmann::json jet_to_json(const Jet& jet) {
  json terms = json::array();
  for (const Jet::Term& term : jet.terms()) {
    json entry;
    entry["exponents"] = term.monomial.exponents(jet.dim());
    entry["coeff"] = to_string(term.coefficient);
    terms.push_back(std::move(entry));
  }
  return terms;
}

Jet jet_from_json(const nlohmann::json& doc, int dim, int degree_cap) {
  if (!doc.is_array()) fail("a jet must be an array of terms");
  std::vector<Jet::Term> terms;
  for (const json& entry : doc) {
    if (!entry.is_object()) fail("jet term must be an object");
    const json& exps = require_field(entry, "exponents", "jet term");
    if (!exps.is_array() || exps.size() != static_cast<std::size_t>(dim)) {
      fail("jet term exponents must be an array of length " + std::to_string(dim));
    }
    std::vector<int> exponents;
    for (const json& e : exps) {
      const int value = require_int(e, "jet exponent");
      if (value < 0) fail("jet exponents must be nonnegative");
      exponents.push_back(value);
    }
    const Rational coeff =
        parse_rational(require_string(require_field(entry, "coeff", "jet term"), "jet coeff"));
    try {
      terms.push_back({Monomial::from_exponents(exponents), coeff});
    } catch (const DomainError& e) {
      fail(std::string("invalid jet term: ") + e.what());
    }
  }
  try {
    return Jet::from_terms(dim, degree_cap, std::move(terms));
  } catch (const ShapeError& e) {
    fail(std::string("invalid jet: ") + e.what());
  } catch (const DomainError& e) {
    fail(std::string("invalid jet: ") + e.what());
  }
}

ModelDocument load_model(const nlohmann::json& doc) {
  require_header(doc, "model");
  const int dim = require_int(require_field(doc, "dim", "model"), "dim");
  if (dim < 3 || dim > Monomial::kMaxDim) {
    fail("model dim must be between 3 and " + std::to_string(Monomial::kMaxDim));
  }
  const json& sig = require_field(doc, "signature", "model");
  if (!sig.is_array() || sig.size() != 2) fail("signature must be [p, q]");
  const int p = require_int(sig.at(0), "signature p");
  const int q = require_int(sig.at(1), "signature q");
  if (p < 0 || q < 0 || p + q != dim) fail("signature must be nonnegative and sum to dim");

  int order = 4;
  std::uint64_t seed = 0;
  if (doc.contains("options")) {
    const json& options = doc.at("options");
    if (!options.is_object()) fail("options must be an object");
    if (options.contains("order")) order = require_int(options.at("order"), "order");
    if (options.contains("seed")) {
      if (!options.at("seed").is_number_unsigned() && !options.at("seed").is_number_integer()) {
        fail("seed must be a nonnegative integer");
      }
      if (options.at("seed").is_number_integer() && options.at("seed").get<long long>() < 0) {
        fail("seed must be a nonnegative integer");
      }
      seed = options.at("seed").get<std::uint64_t>();
    }
  }
  if (order < 2) fail("order must be at least 2");
  const int cap = order + 1;
  if (cap > Monomial::kMaxExponent) fail("order too large for the engine");

  // Curvature operator: sparse 1-based entries, duplicates rejected.
  const json& op_entries = require_field(doc, "operator", "model");
  if (!op_entries.is_array()) fail("operator must be an array of entries");
  Tensor4<Rational> components(dim, Rational(0));
  std::set<std::tuple<int, int, int, int>> seen;
  for (const json& entry : op_entries) {
    const json& indices = require_field(entry, "indices", "operator entry");
    if (!indices.is_array() || indices.size() != 4) {
      fail("operator entry indices must be [i, j, k, l]");
    }
    int idx[4];
    for (int n = 0; n < 4; ++n) {
      idx[n] = require_int(indices.at(static_cast<std::size_t>(n)), "operator index");
      if (idx[n] < 1 || idx[n] > dim) {
        fail("operator index " + std::to_string(idx[n]) + " out of range 1.." +
             std::to_string(dim));
      }
    }
    if (!seen.insert({idx[0], idx[1], idx[2], idx[3]}).second) {
      fail("duplicate operator entry at indices [" + std::to_string(idx[0]) + ", " +
           std::to_string(idx[1]) + ", " + std::to_string(idx[2]) + ", " +
           std::to_string(idx[3]) + "]");
    }
    components(idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1) =
        parse_rational(require_string(require_field(entry, "value", "operator entry"),
                                      "operator value"));
  }
  AlgebraicCurvatureOperator op = AlgebraicCurvatureOperator::checked(std::move(components));

  // Metric: either a constant matrix or sparse jet entries.
  const json& metric_doc = require_field(doc, "metric", "model");
  if (!metric_doc.is_object()) fail("metric must be an object");
  SquareMatrix<Jet> metric_components(dim, Jet(dim, cap));
  bool metric_is_constant = false;
  if (metric_doc.contains("constant")) {
    metric_is_constant = true;
    const json& rows = metric_doc.at("constant");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(dim)) {
      fail("constant metric must be a " + std::to_string(dim) + "-row matrix");
    }
    for (int i = 0; i < dim; ++i) {
      const json& row = rows.at(static_cast<std::size_t>(i));
      if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
        fail("constant metric rows must have length " + std::to_string(dim));
      }
      for (int j = 0; j < dim; ++j) {
        const Rational value = parse_rational(
            require_string(row.at(static_cast<std::size_t>(j)), "metric entry"));
        metric_components(i, j) = Jet::constant(dim, cap, value);
      }
    }
  } else if (metric_doc.contains("entries")) {
    std::set<std::pair<int, int>> given;
    for (const json& entry : metric_doc.at("entries")) {
      const int i = require_int(require_field(entry, "i", "metric entry"), "metric index i");
      const int j = require_int(require_field(entry, "j", "metric entry"), "metric index j");
      if (i < 1 || i > dim || j < 1 || j > dim) fail("metric entry index out of range");
      if (!given.insert({i, j}).second) {
        fail("duplicate metric entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      // The realization reads the metric through degree order + 1; higher
      // terms in the document are cut here, on purpose.
      Jet raw = jet_from_json(require_field(entry, "jet", "metric entry"), dim,
                              Monomial::kMaxExponent);
      Jet value = raw.truncated(cap);
      const int a = i - 1;
      const int b = j - 1;
      if (given.count({j, i}) && !(metric_components(b, a) == value) && i != j) {
        fail("metric entries (" + std::to_string(i) + ", " + std::to_string(j) + ") and (" +
             std::to_string(j) + ", " + std::to_string(i) + ") disagree");
      }
      metric_components(a, b) = value;
      metric_components(b, a) = std::move(value);
    }
  } else {
    fail("metric needs either \"constant\" or \"entries\"");
  }

  MetricField metric = [&] {
    try {
      return MetricField::checked(p, q, std::move(metric_components));
    } catch (const DomainError& e) {
      fail(std::string("invalid metric: ") + e.what());
    }
  }();

  return ModelDocument{std::move(op), std::move(metric), order, seed, metric_is_constant};
}

nlohmann::json model_to_json(const ModelDocument& model) {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "model";
  const int dim = model.metric.dim();
  doc["dim"] = dim;
  doc["signature"] = {model.metric.signature().first, model.metric.signature().second};
  doc["options"]["order"] = model.order;
  doc["options"]["seed"] = model.seed;

  json op_entries = json::array();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          const Rational& value = model.op(i, j, k, l);
          if (is_zero(value)) continue;
          json entry;
          entry["indices"] = {i + 1, j + 1, k + 1, l + 1};
          entry["value"] = to_string(value);
          op_entries.push_back(std::move(entry));
        }
  doc["operator"] = std::move(op_entries);

  bool constant = true;
  for (int i = 0; i < dim && constant; ++i)
    for (int j = 0; j < dim; ++j) {
      const Jet& jet = model.metric(i, j);
      if (!(jet == Jet::constant(dim, jet.degree_cap(), jet.constant_term()))) {
        constant = false;
        break;
      }
    }
  if (constant && model.metric_is_constant) {
    BilinearForm values = model.metric.value_at_origin();
    doc["metric"]["constant"] = rational_matrix_to_json(values);
  } else {
    json entries = json::array();
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        if (model.metric(i, j).is_zero()) continue;
        json entry;
        entry["i"] = i + 1;
        entry["j"] = j + 1;
        entry["jet"] = jet_to_json(model.metric(i, j));
        entries.push_back(std::move(entry));
      }
    doc["metric"]["entries"] = std::move(entries);
  }
  return doc;
}

ChristoffelField load_christoffel(const nlohmann::json& doc) {
  require_header(doc, "christoffel");
  const int dim = require_int(require_field(doc, "dim", "christoffel"), "dim");
  if (dim < 1 || dim > Monomial::kMaxDim) fail("christoffel dim out of range");
  const int cap = require_int(require_field(doc, "degree_cap", "christoffel"), "degree_cap");
  if (cap < 1 || cap > Monomial::kMaxExponent) fail("christoffel degree_cap out of range");

  ChristoffelField gamma(dim, cap);
  std::set<std::tuple<int, int, int>> given;
  const json& entries = require_field(doc, "entries", "christoffel");
  if (!entries.is_array()) fail("christoffel entries must be an array");
  for (const json& entry : entries) {
    const json& lower = require_field(entry, "lower", "christoffel entry");
    if (!lower.is_array() || lower.size() != 2) fail("christoffel lower must be [i, j]");
    const int i = require_int(lower.at(0), "christoffel lower index");
    const int j = require_int(lower.at(1), "christoffel lower index");
    const int l = require_int(require_field(entry, "upper", "christoffel entry"),
                              "christoffel upper index");
    if (i < 1 || i > dim || j < 1 || j > dim || l < 1 || l > dim) {
      fail("christoffel entry index out of range");
    }
    if (!given.insert({i, j, l}).second) {
      fail("duplicate christoffel entry (" + std::to_string(i) + ", " + std::to_string(j) +
           ") -> " + std::to_string(l));
    }
    Jet value = jet_from_json(require_field(entry, "jet", "christoffel entry"), dim, cap);
    // Torsion freedom is an invariant of the type: both lower orders must
    // agree, whether given once (mirrored) or twice (checked).
    if (given.count({j, i, l}) && i != j && !(gamma(j - 1, i - 1, l - 1) == value)) {
      fail("christoffel entries (" + std::to_string(i) + ", " + std::to_string(j) + ") and (" +
           std::to_string(j) + ", " + std::to_string(i) + ") -> " + std::to_string(l) +
           " disagree; the connection must be torsion-free");
    }
    gamma.set_symmetric_pair(i - 1, j - 1, l - 1, std::move(value));
  }
  return gamma;
}

nlohmann::json christoffel_to_json(const ChristoffelField& gamma) {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "christoffel";
  doc["dim"] = gamma.dim();
  doc["degree_cap"] = gamma.degree_cap();
  json entries = json::array();
  for (int i = 0; i < gamma.dim(); ++i)
    for (int j = i; j < gamma.dim(); ++j)
      for (int l = 0; l < gamma.dim(); ++l) {
        if (gamma(i, j, l).is_zero()) continue;
        json entry;
        entry["lower"] = {i + 1, j + 1};
        entry["upper"] = l + 1;
        entry["jet"] = jet_to_json(gamma(i, j, l));
        entries.push_back(std::move(entry));
      }
  doc["entries"] = std::move(entries);
  return doc;
}

nlohmann::json verdict_to_json(const Verdict& verdict) {
  json doc;
  doc["name"] = verdict.name;
  doc["pass"] = verdict.pass;
  doc["verified_degree"] = verdict.verified_degree;
  if (verdict.witness.has_value()) {
    json w;
    w["component"] = verdict.witness->component;
    w["exponents"] = verdict.witness->exponents;
    w["expected"] = verdict.witness->expected;
    w["got"] = verdict.witness->got;
    doc["witness"] = std::move(w);
  } else {
    doc["witness"] = nullptr;
  }
  doc["notes"] = json::object();
  for (const auto& [key, value] : verdict.notes) doc["notes"][key] = value;
  return doc;
}

nlohmann::json report_to_json(const RealizationReport& report) {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "realization_report";
  doc["dim"] = report.dim;
  doc["order"] = report.order;
  doc["signature"] = {report.signature.first, report.signature.second};

  json normalization;
  normalization["value_normalized"] = report.normalization.value_normalized;
  normalization["input_was_first_order_flat"] = report.normalization.input_was_first_order_flat;
  json map = json::array();
  for (const Jet& jet : report.normalization.coordinate_map) map.push_back(jet_to_json(jet));
  normalization["coordinate_map"] = std::move(map);
  normalization["regularity_condition"] = report.normalization.regularity_condition;
  doc["normalization"] = std::move(normalization);

  json iterations = json::array();
  for (const IterationSummary& summary : report.iterations) {
    json it;
    it["nu"] = summary.nu;
    if (summary.defect_valuation == kValuationInfinity) {
      it["defect_valuation"] = "inf";
    } else {
      it["defect_valuation"] = summary.defect_valuation;
    }
    it["decay_order"] = summary.decay_order;
    it["defect_norm_sample"] = to_string(summary.defect_norm_sample);
    if (summary.correction_valuation.has_value()) {
      it["correction_valuation"] = *summary.correction_valuation;
    }
    if (summary.correction_norm_sample.has_value()) {
      it["correction_norm_sample"] = to_string(*summary.correction_norm_sample);
    }
    if (summary.recursion_identity_verified.has_value()) {
      it["recursion_identity_verified"] = *summary.recursion_identity_verified;
    }
    iterations.push_back(std::move(it));
  }
  doc["iterations"] = std::move(iterations);
  doc["converged"] = report.converged;
  doc["iterations_used"] = report.iterations_used;

  json verdicts = json::array();
  bool all_pass = true;
  for (const Verdict& verdict : report.verdicts) {
    all_pass = all_pass && verdict.pass;
    verdicts.push_back(verdict_to_json(verdict));
  }
  doc["verdicts"] = std::move(verdicts);
  doc["pass"] = all_pass && report.converged;
  return doc;
}

nlohmann::json verification_to_json(int dim, int order, const std::vector<Verdict>& verdicts) {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "verification";
  doc["dim"] = dim;
  doc["order"] = order;
  json list = json::array();
  bool all_pass = true;
  for (const Verdict& verdict : verdicts) {
    all_pass = all_pass && verdict.pass;
    list.push_back(verdict_to_json(verdict));
  }
  doc["verdicts"] = std::move(list);
  doc["pass"] = all_pass;
  return doc;
}

nlohmann::json classification_to_json(const AlgebraicCurvatureOperator& op,
                                      const InnerProduct& inner) {
  const ClassificationFlags flags = classify(op, inner);
  const BilinearForm rho = ricci(op);
  const RicciSplit<Rational> split = ricci_split(rho);
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "classification";
  doc["dim"] = op.dim();
  doc["signature"] = {inner.signature().first, inner.signature().second};
  doc["flags"]["projectively_flat"] = flags.projectively_flat;
  doc["flags"]["ricci_symmetric"] = flags.ricci_symmetric;
  doc["flags"]["ricci_antisymmetric"] = flags.ricci_antisymmetric;
  doc["flags"]["ricci_traceless"] = flags.ricci_traceless;
  doc["scalar_curvature"] = to_string(scalar_curvature(op, inner));
  doc["ricci"] = rational_matrix_to_json(rho);
  doc["ricci_symmetric_part"] = rational_matrix_to_json(split.symmetric);
  doc["ricci_antisymmetric_part"] = rational_matrix_to_json(split.antisymmetric);
  doc["trace_free_ricci"] = rational_matrix_to_json(trace_free_ricci(op, inner));
  return doc;
}

std::string dump_canonical(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace curvreal
