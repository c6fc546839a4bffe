#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qk/curvature.hpp"
#include "qk/io.hpp"
#include "qk/models.hpp"
#include "qk/mu.hpp"
#include "qk/structure.hpp"

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

qk::ModelSpace make_model(const std::string& name, int m, double kappa) {
  if (m < 2 || m > 6) throw std::invalid_argument("m must be in [2, 6]");
  if (name == "hp") return qk::hp_model(m, kappa);
  if (name == "gr2c") return qk::grassmannian_model(m);
  throw std::invalid_argument("unknown model '" + name + "' (expected hp or gr2c)");
}

int parse_m(const std::string& text) {
  std::size_t used = 0;
  int m = 0;
  try {
    m = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid m '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("invalid m '" + text + "'");
  return m;
}

void print_reports(const std::vector<qk::IdentityReport>& reports, double tol, bool as_json) {
  if (as_json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const qk::IdentityReport& r : reports)
      arr.push_back({{"name", r.name},
                     {"max_residual", r.max_residual},
                     {"samples", r.samples},
                     {"inputs_hash", r.inputs_hash},
                     {"pass", r.max_residual <= tol}});
    std::cout << arr.dump(2) << '\n';
    return;
  }
  for (const qk::IdentityReport& r : reports) {
    std::printf("%-18s %-24s %s\n", r.name.c_str(), fmt(r.max_residual).c_str(),
                r.max_residual <= tol ? "pass" : "fail");
  }
}

void print_mu(const qk::MuReport& rep, bool as_json) {
  if (as_json) {
    nlohmann::ordered_json doc;
    doc["mu_hat"] = rep.mu_hat;
    doc["kappa"] = rep.kappa;
    doc["a"] = rep.a;
    doc["b"] = rep.b;
    doc["c"] = rep.c;
    doc["X"] = std::vector<double>(rep.X.data(), rep.X.data() + rep.X.size());
    doc["restarts"] = rep.restarts;
    doc["grid_oracle_value"] = rep.grid_oracle_value;
    doc["first_order_residual"] = rep.first_order_residual;
    doc["dichotomy_verdict"] = rep.dichotomy_verdict;
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::printf("mu_hat               %s\n", fmt(rep.mu_hat).c_str());
  std::printf("kappa                %s\n", fmt(rep.kappa).c_str());
  std::printf("a b c                %s %s %s\n", fmt(rep.a).c_str(), fmt(rep.b).c_str(),
              fmt(rep.c).c_str());
  std::ostringstream xs;
  for (qk::Index i = 0; i < rep.X.size(); ++i) {
    if (i) xs << ' ';
    xs << fmt(rep.X[i]);
  }
  std::printf("X                    %s\n", xs.str().c_str());
  std::printf("restarts             %d\n", rep.restarts);
  std::printf("grid_oracle_value    %s\n", fmt(rep.grid_oracle_value).c_str());
  std::printf("first_order_residual %s\n", fmt(rep.first_order_residual).c_str());
  std::printf("dichotomy_verdict    %s\n", rep.dichotomy_verdict.c_str());
}

int run_model(const std::string& name, int m, double kappa, const std::string& out,
              const std::string& format) {
  const qk::ModelSpace model = make_model(name, m, kappa);
  qk::write_tensor_file(qk::model_to_file(model), out, format == "bin");
  return 0;
}

int run_verify(const std::string& path, const std::vector<std::string>& model_spec, double tol,
               uint64_t seed, bool as_json) {
  std::vector<qk::IdentityReport> reports;
  if (!model_spec.empty()) {
    const qk::ModelSpace model = make_model(model_spec[0], parse_m(model_spec[1]), 1.0);
    reports = qk::model_suite(model, tol, seed);
  } else if (!path.empty()) {
    const qk::TensorFile file = qk::read_tensor_file(path);
    switch (file.header.kind) {
      case qk::TensorKind::model:
        reports = qk::model_suite(qk::model_from_file(file), tol, seed);
        break;
      case qk::TensorKind::curvature: {
        const qk::CurvatureTensor r1 = qk::curvature_from_file(file);
        reports = qk::tensor_suite(r1, qk::standard_structure(file.header.m), tol, seed);
        break;
      }
      case qk::TensorKind::decomposition: {
        const auto [dec, Q] = qk::decomposition_from_file(file);
        reports = qk::tensor_suite(dec.r1, Q, tol, seed);
        break;
      }
      case qk::TensorKind::structure: {
        const qk::QuaternionicStructure Q = qk::structure_from_file(file);
        reports.push_back(qk::IdentityReport{"structure-relations", qk::structure_residual(Q), 0,
                                             "seed:" + std::to_string(seed)});
        break;
      }
    }
  } else {
    throw std::invalid_argument("verify: provide a tensor file path or --model NAME M");
  }
  print_reports(reports, tol, as_json);
  return qk::all_pass(reports, tol) ? 0 : 1;
}

int run_mu(const std::string& path, const std::vector<std::string>& model_spec,
           const qk::MuOptions& opts, bool as_json) {
  qk::MuReport rep;
  if (!model_spec.empty()) {
    const qk::ModelSpace model = make_model(model_spec[0], parse_m(model_spec[1]), 1.0);
    rep = qk::estimate_mu(qk::decompose(model.R, model.Q), model.Q, opts);
  } else if (!path.empty()) {
    const qk::TensorFile file = qk::read_tensor_file(path);
    switch (file.header.kind) {
      case qk::TensorKind::model: {
        const qk::ModelSpace model = qk::model_from_file(file);
        rep = qk::estimate_mu(qk::decompose(model.R, model.Q), model.Q, opts);
        break;
      }
      case qk::TensorKind::decomposition: {
        const auto [dec, Q] = qk::decomposition_from_file(file);
        rep = qk::estimate_mu(dec, Q, opts);
        break;
      }
      case qk::TensorKind::curvature: {
        // A bare trace-free tensor has no kappa; the verdict thresholds then
        // degenerate and the report is purely informational.
        qk::QKDecomposition dec{0.0, qk::curvature_from_file(file)};
        rep = qk::estimate_mu(dec, qk::standard_structure(file.header.m), opts);
        break;
      }
      default:
        throw std::invalid_argument("mu: structure files carry no curvature to optimize");
    }
  } else {
    throw std::invalid_argument("mu: provide a tensor file path or --model NAME M");
  }
  print_mu(rep, as_json);
  return 0;
}

int run_gen(int m, uint64_t seed, double scale, const std::string& out,
            const std::string& format) {
  if (m < 2 || m > 6) throw std::invalid_argument("m must be in [2, 6]");
  const qk::QuaternionicStructure Q = qk::standard_structure(m);
  const qk::CurvatureTensor r1 = qk::random_r1(Q, seed, scale);
  qk::write_tensor_file(qk::curvature_to_file(r1, m), out, format == "bin");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) Eigen::setNbThreads(threads);
  }

  CLI::App app{"Curvature-algebra toolkit for quaternionic structures"};
  app.require_subcommand(1);

  // model
  std::string model_name;
  int model_m = 2;
  double model_kappa = 1.0;
  std::string model_out;
  std::string model_format = "json";
  CLI::App* cmd_model = app.add_subcommand("model", "Write a built-in model space to a file");
  cmd_model->add_option("name", model_name, "Model name: hp or gr2c")->required();
  cmd_model->add_option("m", model_m, "Quaternionic dimension")->required();
  cmd_model->add_option("--kappa", model_kappa, "Curvature scale (hp only)");
  cmd_model->add_option("-o,--output", model_out, "Output path")->required();
  cmd_model->add_option("--format", model_format, "File format")
      ->check(CLI::IsMember({"json", "bin"}));

  // verify
  std::string verify_path;
  std::vector<std::string> verify_model;
  double verify_tol = 1e-8;
  uint64_t verify_seed = 0;
  bool verify_json = false;
  CLI::App* cmd_verify = app.add_subcommand("verify", "Run the identity suite on a file or model");
  cmd_verify->add_option("path", verify_path, "Tensor file to verify");
  cmd_verify->add_option("--model", verify_model, "Built-in model: NAME M")->expected(2);
  cmd_verify->add_option("--tol", verify_tol, "Pass/fail tolerance");
  cmd_verify->add_option("--seed", verify_seed, "Sampling seed");
  cmd_verify->add_flag("--json", verify_json, "Emit a JSON report");

  // mu
  std::string mu_path;
  std::vector<std::string> mu_model;
  qk::MuOptions mu_opts;
  bool mu_json = false;
  CLI::App* cmd_mu = app.add_subcommand("mu", "Estimate the supremum of the diagonal invariant");
  cmd_mu->add_option("path", mu_path, "Tensor file to optimize over");
  cmd_mu->add_option("--model", mu_model, "Built-in model: NAME M")->expected(2);
  cmd_mu->add_option("--restarts", mu_opts.restarts, "Ascent restarts");
  cmd_mu->add_option("--seed", mu_opts.seed, "Sampling seed");
  cmd_mu->add_option("--grid-density", mu_opts.grid_density, "Grid points on the vector sphere");
  cmd_mu->add_option("--sphere-density", mu_opts.sphere_density,
                     "Grid points on the coefficient sphere");
  cmd_mu->add_flag("--json", mu_json, "Emit a JSON report");

  // gen
  int gen_m = 2;
  uint64_t gen_seed = 0;
  double gen_scale = 1.0;
  std::string gen_out;
  std::string gen_format = "json";
  CLI::App* cmd_gen = app.add_subcommand("gen", "Write a random admissible trace-free tensor");
  cmd_gen->add_option("--m", gen_m, "Quaternionic dimension")->required();
  cmd_gen->add_option("--seed", gen_seed, "Generator seed");
  cmd_gen->add_option("--scale", gen_scale, "Max-norm scale of the output");
  cmd_gen->add_option("-o,--output", gen_out, "Output path")->required();
  cmd_gen->add_option("--format", gen_format, "File format")
      ->check(CLI::IsMember({"json", "bin"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_model->parsed()) return run_model(model_name, model_m, model_kappa, model_out, model_format);
    if (cmd_verify->parsed()) {
      if (!verify_model.empty() && !verify_path.empty())
        throw std::invalid_argument("verify: give either a path or --model, not both");
      return run_verify(verify_path, verify_model, verify_tol, verify_seed, verify_json);
    }
    if (cmd_mu->parsed()) {
      if (!mu_model.empty() && !mu_path.empty())
        throw std::invalid_argument("mu: give either a path or --model, not both");
      return run_mu(mu_path, mu_model, mu_opts, mu_json);
    }
    if (cmd_gen->parsed()) return run_gen(gen_m, gen_seed, gen_scale, gen_out, gen_format);
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const qk::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qk::ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
