#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "curvreal/errors.hpp"
#include "curvreal/serialize.hpp"
#include "curvreal/verify.hpp"

namespace {

using curvreal::AlgebraicCurvatureOperator;
using curvreal::ChristoffelField;
using curvreal::InnerProduct;
using curvreal::ModelDocument;
using curvreal::Verdict;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitVerificationFailed = 3;
constexpr int kExitInternal = 4;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw curvreal::ValidationError("cannot open \"" + path + "\" for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw curvreal::ValidationError("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw curvreal::ValidationError("cannot open \"" + path + "\" for writing");
  out << text;
}

void print_verdicts(const std::vector<Verdict>& verdicts) {
  for (const Verdict& verdict : verdicts) {
    std::cout << (verdict.pass ? "pass" : "FAIL") << "  " << verdict.name
              << "  (through degree " << verdict.verified_degree << ")";
    if (!verdict.pass && verdict.witness.has_value()) {
      std::cout << "  first mismatch at component [";
      for (std::size_t n = 0; n < verdict.witness->component.size(); ++n) {
        std::cout << (n ? ", " : "") << verdict.witness->component[n];
      }
      std::cout << "], monomial [";
      for (std::size_t n = 0; n < verdict.witness->exponents.size(); ++n) {
        std::cout << (n ? ", " : "") << verdict.witness->exponents[n];
      }
      std::cout << "]: expected " << verdict.witness->expected << ", got "
                << verdict.witness->got;
    }
    std::cout << "\n";
  }
}

struct RealizeArgs {
  std::string model_path;
  std::string output_path = "-";
  std::string report_path;
  std::optional<int> order_override;
  bool check_only = false;
};

int cmd_realize(const RealizeArgs& args) {
  ModelDocument model = curvreal::load_model(read_json(args.model_path));
  const int order = args.order_override.value_or(model.order);
  curvreal::RealizationResult result =
      curvreal::realize(model.op, model.metric, order);
  result.report.verdicts = curvreal::run_all_checks(result.gamma, model.op,
                                                    result.normalized_metric, result.frame);
  bool all_pass = result.report.converged;
  for (const Verdict& verdict : result.report.verdicts) all_pass = all_pass && verdict.pass;

  print_verdicts(result.report.verdicts);
  std::cout << (result.report.converged ? "converged" : "DID NOT CONVERGE") << " after "
            << result.report.iterations_used << " round(s)\n";

  if (!args.check_only) {
    write_text(args.output_path,
               curvreal::dump_canonical(curvreal::christoffel_to_json(result.gamma)));
    if (!args.report_path.empty()) {
      write_text(args.report_path,
                 curvreal::dump_canonical(curvreal::report_to_json(result.report)));
    }
  }
  return all_pass ? kExitOk : kExitVerificationFailed;
}

struct CheckArgs {
  std::string model_path;
  std::string connection_path;
  std::string output_path;
};

int cmd_check(const CheckArgs& args) {
  ModelDocument model = curvreal::load_model(read_json(args.model_path));
  ChristoffelField gamma = curvreal::load_christoffel(read_json(args.connection_path));
  if (gamma.dim() != model.metric.dim()) {
    throw curvreal::ValidationError("connection dimension does not match the model");
  }
  if (gamma.degree_cap() < 3) {
    throw curvreal::ValidationError("connection degree cap must be at least 3 to check "
                                    "anything beyond the origin");
  }
  const int order = gamma.degree_cap() - 1;

  // Rebuild the normalized coordinates and frame the realization would use.
  const curvreal::MetricField input = model.metric.degree_cap() == order + 1
                                          ? model.metric
                                          : model.metric.truncated(order + 1);
  if (!curvreal::validate_normal_form(input).value_normalized) {
    throw curvreal::ValidationError("model metric is not value-normalized; checks are "
                                    "defined in normalized coordinates");
  }
  curvreal::QuadraticNormalization normalization = curvreal::quadratic_normalize(input);
  const curvreal::FrameField frame = curvreal::orthonormal_frame(normalization.metric);

  const std::vector<Verdict> verdicts =
      curvreal::run_all_checks(gamma, model.op, normalization.metric, frame);
  print_verdicts(verdicts);
  bool all_pass = true;
  for (const Verdict& verdict : verdicts) all_pass = all_pass && verdict.pass;
  if (!args.output_path.empty()) {
    write_text(args.output_path, curvreal::dump_canonical(curvreal::verification_to_json(
                                     gamma.dim(), order, verdicts)));
  }
  return all_pass ? kExitOk : kExitVerificationFailed;
}

struct ClassifyArgs {
  std::string model_path;
  std::string output_path = "-";
};

int cmd_classify(const ClassifyArgs& args) {
  ModelDocument model = curvreal::load_model(read_json(args.model_path));
  const InnerProduct inner = InnerProduct::checked(model.metric.value_at_origin());
  write_text(args.output_path,
             curvreal::dump_canonical(curvreal::classification_to_json(model.op, inner)));
  return kExitOk;
}

struct RandomModelArgs {
  int dim = 3;
  int timelike = 0;
  int order = 4;
  std::uint64_t seed = 0;
  int bound = 4;
  bool force_ricci_symmetric = false;
  bool force_ricci_antisymmetric = false;
  bool force_traceless = false;
  std::string output_path = "-";
};

int cmd_random_model(const RandomModelArgs& args) {
  if (args.timelike < 0 || args.timelike > args.dim) {
    throw curvreal::ValidationError("timelike count must lie between 0 and dim");
  }
  const int p = args.timelike;
  const int q = args.dim - args.timelike;
  AlgebraicCurvatureOperator op =
      curvreal::random_curvature_operator(args.seed, args.dim, args.bound);
  const InnerProduct inner = InnerProduct::standard(p, q);
  if (args.force_ricci_symmetric) {
    op = op - curvreal::sigma_a(antisymmetric_part(ricci(op)));
  }
  if (args.force_ricci_antisymmetric) {
    op = op - curvreal::sigma_s(symmetric_part(ricci(op)));
  }
  if (args.force_traceless) {
    const curvreal::Rational tau = curvreal::scalar_curvature(op, inner);
    op = op - curvreal::sigma_s(inner.form() * (tau / args.dim));
  }
  ModelDocument model{std::move(op),
                      curvreal::MetricField::constant_diagonal(p, q, args.order + 1),
                      args.order, args.seed, true};
  write_text(args.output_path, curvreal::dump_canonical(curvreal::model_to_json(model)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact realization of constant-curvature-type connections on polynomial jets"};
  app.require_subcommand(1);

  RealizeArgs realize_args;
  CLI::App* realize = app.add_subcommand(
      "realize", "Construct a connection whose curvature data matches a model document");
  realize->add_option("--model", realize_args.model_path, "model document (JSON)")->required();
  realize->add_option("--output", realize_args.output_path,
                      "where to write the connection document (\"-\" for stdout)");
  realize->add_option("--report", realize_args.report_path, "where to write the run report");
  realize->add_option("--order", realize_args.order_override,
                      "override the curvature order from the model");
  realize->add_flag("--check-only", realize_args.check_only,
                    "run and verify but do not write any documents");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Verify a connection document against a model document");
  check->add_option("--model", check_args.model_path, "model document (JSON)")->required();
  check->add_option("--connection", check_args.connection_path, "connection document (JSON)")
      ->required();
  check->add_option("--output", check_args.output_path, "where to write the verdict document");

  ClassifyArgs classify_args;
  CLI::App* classify = app.add_subcommand(
      "classify", "Classify the model's curvature operator against its inner product");
  classify->add_option("--model", classify_args.model_path, "model document (JSON)")->required();
  classify->add_option("--output", classify_args.output_path,
                       "where to write the classification document");

  RandomModelArgs random_args;
  CLI::App* random_model = app.add_subcommand(
      "random-model", "Emit a reproducible random model document");
  random_model->add_option("--dim", random_args.dim, "dimension (3..8)");
  random_model->add_option("--timelike", random_args.timelike,
                           "number of timelike axes (signature p)");
  random_model->add_option("--order", random_args.order, "curvature order");
  random_model->add_option("--seed", random_args.seed, "random seed");
  random_model->add_option("--bound", random_args.bound, "coefficient bound");
  random_model->add_flag("--ricci-symmetric", random_args.force_ricci_symmetric,
                         "project the operator onto symmetric Ricci");
  random_model->add_flag("--ricci-antisymmetric", random_args.force_ricci_antisymmetric,
                         "project the operator onto antisymmetric Ricci");
  random_model->add_flag("--traceless", random_args.force_traceless,
                         "remove the scalar trace part");
  random_model->add_option("--output", random_args.output_path,
                           "where to write the model document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (realize->parsed()) return cmd_realize(realize_args);
    if (check->parsed()) return cmd_check(check_args);
    if (classify->parsed()) return cmd_classify(classify_args);
    if (random_model->parsed()) return cmd_random_model(random_args);
    std::cerr << "error: no subcommand given\n";
    return kExitUsage;
  } catch (const curvreal::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const curvreal::ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const curvreal::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const curvreal::InternalError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitInternal;
  }
}
