// Command-line front end: certify, generate, experiment, check-lemmas.
//
// Exit codes: 0 success, 1 hypothesis or inequality failure, 2 usage or
// parse error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsecert/codes.hpp"
#include "sparsecert/constants.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/experiment.hpp"
#include "sparsecert/io.hpp"
#include "sparsecert/lemmas.hpp"
#include "sparsecert/lower_bound.hpp"

namespace sc = sparsecert;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::string dict;
  std::string codes;
  std::string hypergraph;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  double tol = sc::kDefaultRankTol;
  bool data_poly = false;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    sc::io::write_file(out, text);
  }
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return json::parse(sc::io::read_file(path));
  } catch (const json::parse_error& e) {
    throw sc::ParseError(path + ": " + e.what());
  }
}

int run_certify(const Options& opt) {
  if (opt.dict.empty() || opt.codes.empty() || opt.hypergraph.empty()) {
    std::cerr << "certify needs --dict, --codes and --hypergraph\n";
    return kUsage;
  }
  const Eigen::MatrixXd a = sc::io::load_matrix(opt.dict);
  const sc::SparseCodeSet codes = sc::io::load_codes(opt.codes);
  const sc::Hypergraph h = sc::io::load_hypergraph(opt.hypergraph);
  if (a.cols() != codes.dimension() || a.cols() != h.vertex_count()) {
    throw sc::ParseError("dictionary columns, code length and hypergraph size disagree");
  }
  if (!h.uniform_size()) throw sc::ParseError("hypergraph must be uniform");

  sc::ConstantsOptions copt;
  copt.rank_tol = opt.tol;
  const sc::StabilityCertificate cert = sc::certify(a, codes, h, copt);
  json out = sc::io::certificate_to_json(cert);
  out["inputs"] = {{"dictionary", sc::io::digest(sc::io::read_file(opt.dict))},
                   {"codes", sc::io::digest(sc::io::read_file(opt.codes))},
                   {"hypergraph", sc::io::digest(sc::io::read_file(opt.hypergraph))}};
  out["sample_size_cor1"] = sc::sample_size_cor1(cert.m, cert.k, h).str();
  if (opt.data_poly) {
    // spark polynomial of the data matrix A X, tiny instances only
    const Eigen::MatrixXd data = a * codes.codes();
    try {
      const auto poly = sc::spark_polynomial(data, cert.k, 50'000);
      out["data_spark_polynomial"] = {{"value", poly.value}, {"nonzero", poly.nonzero}};
    } catch (const std::exception& e) {
      out["data_spark_polynomial"] = {{"error", e.what()}};
    }
  }
  emit(out.dump(2) + "\n", opt.out);
  return cert.dictionary_certified() ? kOk : kFailed;
}

int run_generate(const Options& opt) {
  if (opt.out.empty()) {
    std::cerr << "generate needs --out DIRECTORY\n";
    return kUsage;
  }
  const json cfg = load_config(opt.config);
  const int m = cfg.value("m", 4);
  const int n = cfg.value("n", 4);
  const int k = cfg.value("k", 2);
  const double eta = cfg.value("eta", 0.0);
  const std::uint64_t seed = opt.seed.value_or(cfg.value("seed", std::uint64_t{1}));
  const std::string kind = cfg.value("hypergraph", std::string("cyclic"));
  const std::string noise = cfg.value("noise", std::string("uniform_ball"));
  sc::HypergraphKind hk = sc::HypergraphKind::cyclic;
  if (kind == "complete") {
    hk = sc::HypergraphKind::complete;
  } else if (kind == "grid") {
    hk = sc::HypergraphKind::grid;
  } else if (kind != "cyclic") {
    throw sc::ParseError("unknown hypergraph kind '" + kind + "'");
  }
  sc::NoiseModel model = sc::NoiseModel::uniform_ball;
  if (noise == "sphere") {
    model = sc::NoiseModel::sphere;
  } else if (noise != "uniform_ball") {
    throw sc::ParseError("unknown noise model '" + noise + "'");
  }
  const sc::Hypergraph h = sc::build_hypergraph(hk, m, k);
  const int per_support = cfg.value("per_support", sc::default_per_support_count(m, k));
  const sc::Instance inst = sc::generate_instance(m, n, k, h, per_support, seed);
  const sc::Dataset data = sc::synthesize_dataset(inst.dictionary, inst.codes, eta, seed, model);

  const std::filesystem::path dir(opt.out);
  std::filesystem::create_directories(dir);
  sc::io::write_file((dir / "dictionary.json").string(),
                     sc::io::matrix_to_json(inst.dictionary).dump() + "\n");
  sc::io::write_file((dir / "codes.json").string(), sc::io::codes_to_json(inst.codes).dump() + "\n");
  sc::io::write_file((dir / "hypergraph.json").string(),
                     sc::io::hypergraph_to_json(h).dump() + "\n");
  sc::io::write_file((dir / "signals.csv").string(), sc::io::matrix_to_csv(data.signals));
  json truth = sc::io::ground_truth_to_json(data);
  truth["hypergraph"] = sc::io::hypergraph_to_json(h);
  sc::io::write_file((dir / "truth.json").string(), truth.dump() + "\n");
  std::cerr << "wrote instance (seed " << seed << ", " << inst.codes.count() << " codes, "
            << inst.attempts << " attempt(s)) to " << dir.string() << "\n";
  return kOk;
}

int run_experiment(const Options& opt) {
  json cfg = load_config(opt.config);
  if (opt.seed) cfg["seed"] = *opt.seed;
  const sc::ExperimentConfig config = sc::experiment_config_from_json(cfg);
  sc::validate(config);
  const sc::ExperimentSummary summary = sc::run_experiment(config);
  emit(sc::records_to_csv(summary.records), opt.out);
  json s = sc::summary_to_json(summary);
  s["config"] = sc::experiment_config_to_json(config);
  std::cerr << s.dump(2) << "\n";
  const bool ok = summary.pass5 == summary.records.size() &&
                  summary.pass6 == summary.checked6 && summary.lower_bound_failures == 0;
  return ok ? kOk : kFailed;
}

int run_check_lemmas(const Options& opt) {
  const json cfg = load_config(opt.config);
  const json l3 = cfg.value("lemma3", json::object());
  const int trials = l3.value("trials", 1000);
  const int ambient = l3.value("ambient_dim", 8);
  const int subspaces = l3.value("subspaces", 4);
  const std::uint64_t seed = opt.seed.value_or(cfg.value("seed", std::uint64_t{1}));
  const sc::Lemma3Report r3 = sc::check_lemma3(trials, ambient, subspaces, seed);

  json report;
  report["lemma3"] = {{"trials", r3.trials},
                      {"ambient_dim", ambient},
                      {"max_subspaces", subspaces},
                      {"violations", r3.violations},
                      {"worst_excess", r3.worst_excess},
                      {"max_xi", r3.max_xi},
                      {"slack", r3.slack}};
  bool ok = r3.violations == 0;

  json cases = json::array();
  if (cfg.contains("lemma4")) {
    for (const auto& c : cfg.at("lemma4")) {
      cases.push_back(c);
    }
  } else {
    for (int m : {3, 4, 5}) {
      for (int mb : {m, m + 1}) {
        cases.push_back({{"hypergraph", sc::io::hypergraph_to_json(sc::build_cyclic(m, 2))},
                         {"m_bar", mb}});
      }
    }
  }
  json l4 = json::array();
  for (const auto& c : cases) {
    const sc::Hypergraph h = sc::io::hypergraph_from_json(c.at("hypergraph"));
    const int m_bar = c.at("m_bar").get<int>();
    const sc::Lemma4Report r4 = sc::check_lemma4(h, m_bar);
    ok = ok && r4.counterexamples == 0;
    l4.push_back({{"m", r4.m},
                  {"m_bar", r4.m_bar},
                  {"r", r4.r},
                  {"admissible_maps", r4.admissible_maps},
                  {"counterexamples", r4.counterexamples},
                  {"required_size", r4.required_size ? json(*r4.required_size) : json(nullptr)},
                  {"min_injective_size",
                   r4.min_injective_size ? json(*r4.min_injective_size) : json(nullptr)}});
  }
  report["lemma4"] = l4;
  report["passed"] = ok;
  emit(report.dump(2) + "\n", opt.out);
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiability and stability certificates for sparse linear coding"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output file (directory for generate)");
    sub->add_option("--seed", opt.seed, "Random seed");
    sub->add_option("--tol", opt.tol, "Relative rank tolerance")->check(CLI::PositiveNumber);
  };

  auto* certify = app.add_subcommand("certify", "Check hypotheses and compute C1, C2, thresholds");
  certify->add_option("--dict", opt.dict, "Dictionary (.json or CSV)");
  certify->add_option("--codes", opt.codes, "Codes (.json or CSV, m x N)");
  certify->add_option("--hypergraph", opt.hypergraph, "Hypergraph JSON");
  certify->add_flag("--data-poly", opt.data_poly,
                    "Also evaluate the spark polynomial of the data matrix (tiny inputs)");
  add_common(certify);

  auto* generate = app.add_subcommand("generate", "Generate an instance and a noisy dataset");
  generate->add_option("--config", opt.config, "Generator config JSON");
  add_common(generate);

  auto* experiment = app.add_subcommand("experiment", "Noise sweep of the recovery bounds");
  experiment->add_option("--config", opt.config, "Experiment config JSON");
  add_common(experiment);

  auto* lemmas = app.add_subcommand("check-lemmas", "Randomized and exhaustive lemma checks");
  lemmas->add_option("--config", opt.config, "Lemma check config JSON");
  add_common(lemmas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*certify) return run_certify(opt);
    if (*generate) return run_generate(opt);
    if (*experiment) return run_experiment(opt);
    if (*lemmas) return run_check_lemmas(opt);
  } catch (const sc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const sc::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
