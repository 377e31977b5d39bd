#include "sparsecert/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include "sparsecert/alignment.hpp"
#include "sparsecert/codes.hpp"
#include "sparsecert/constants.hpp"
#include "sparsecert/errors.hpp"

namespace sparsecert {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  return g;
}

struct Candidate {
  Eigen::MatrixXd b;
  SparseCodeSet codes_bar;
};

// Scales a perturbation so that max_i ||delta_i|| equals target.
double rescale_factor(const Eigen::MatrixXd& deltas, double target) {
  const double worst = deltas.colwise().norm().maxCoeff();
  return worst > 0.0 ? target / worst : 0.0;
}

Candidate perturb(const Eigen::MatrixXd& a, const SparseCodeSet& codes, Perturbation family,
                  double target, std::mt19937_64& rng) {
  const Eigen::Index m = a.cols();
  if (family == Perturbation::code_jitter) {
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(m, codes.count());
    std::normal_distribution<double> normal;
    for (int i = 0; i < codes.count(); ++i) {
      for (int j : codes.supports()[i].indices) delta(j, i) = normal(rng);
    }
    delta *= rescale_factor(a * delta, target);
    Eigen::MatrixXd xbar = codes.codes() + delta;
    return {a, SparseCodeSet(codes.sparsity(), std::move(xbar), codes.supports())};
  }

  Eigen::MatrixXd e = gaussian(a.rows(), m, rng);
  e *= rescale_factor(e * codes.codes(), target);
  const Eigen::MatrixXd jittered = a + e;
  if (family == Perturbation::dictionary_jitter) return {jittered, codes};

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  std::bernoulli_distribution flip(0.5);
  Eigen::MatrixXd b(a.rows(), m);
  Eigen::MatrixXd xbar = Eigen::MatrixXd::Zero(m, codes.count());
  std::vector<SupportSet> supports;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double d = (flip(rng) ? -1.0 : 1.0) * magnitude(rng);
    b.col(perm[j]) = jittered.col(j) / d;
    xbar.row(perm[j]) = d * codes.codes().row(j);
  }
  for (const auto& s : codes.supports()) {
    std::vector<int> moved;
    for (int j : s.indices) moved.push_back(perm[j]);
    supports.emplace_back(std::move(moved));
  }
  return {b, SparseCodeSet(codes.sparsity(), std::move(xbar), std::move(supports))};
}

const char* kind_name(HypergraphKind kind) {
  switch (kind) {
    case HypergraphKind::cyclic: return "cyclic";
    case HypergraphKind::complete: return "complete";
    case HypergraphKind::grid: return "grid";
  }
  return "?";
}

const char* family_name(Perturbation p) {
  switch (p) {
    case Perturbation::dictionary_jitter: return "dictionary_jitter";
    case Perturbation::permuted_jitter: return "permuted_jitter";
    case Perturbation::code_jitter: return "code_jitter";
  }
  return "?";
}

}  // namespace

Hypergraph build_hypergraph(HypergraphKind kind, int m, int k) {
  switch (kind) {
    case HypergraphKind::cyclic: return build_cyclic(m, k);
    case HypergraphKind::complete: return build_complete(m, k);
    case HypergraphKind::grid: {
      Hypergraph h = build_grid(m);
      if (h.uniform_size() != k) throw std::invalid_argument("grid hypergraph needs k = sqrt(m)");
      return h;
    }
  }
  throw std::invalid_argument("unknown hypergraph kind");
}

void validate(const ExperimentConfig& c) {
  if (c.k < 1 || c.k >= c.m) throw std::invalid_argument("experiment: need 1 <= k < m");
  if (c.n < std::min(2 * c.k, c.m)) throw std::invalid_argument("experiment: need n >= min(2k, m)");
  if (c.per_support < 1) throw std::invalid_argument("experiment: per_support must be positive");
  if (c.trials < 1) throw std::invalid_argument("experiment: trials must be positive");
  for (double e : c.eps_grid) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("experiment: bad eps");
  }
  if (c.m > 10 || c.n > 64 || c.per_support > 64 || c.trials > 10'000 ||
      c.eps_grid.size() > 100) {
    throw CapExceeded(
        "experiment: beyond desk scale (m <= 10, n <= 64, per_support <= 64, trials <= 10000, "
        "<= 100 eps values)");
  }
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.m = j.value("m", c.m);
  c.n = j.value("n", c.n);
  c.k = j.value("k", c.k);
  c.per_support = j.value("per_support", default_per_support_count(c.m, c.k));
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.slack = j.value("slack", c.slack);
  c.eps_relative = j.value("eps_relative", c.eps_relative);
  if (j.contains("eps_grid")) c.eps_grid = j.at("eps_grid").get<std::vector<double>>();
  const std::string kind = j.value("hypergraph", std::string("cyclic"));
  if (kind == "cyclic") {
    c.hypergraph = HypergraphKind::cyclic;
  } else if (kind == "complete") {
    c.hypergraph = HypergraphKind::complete;
  } else if (kind == "grid") {
    c.hypergraph = HypergraphKind::grid;
  } else {
    throw ParseError("unknown hypergraph kind '" + kind + "'");
  }
  const std::string family = j.value("family", std::string("dictionary_jitter"));
  if (family == "dictionary_jitter") {
    c.family = Perturbation::dictionary_jitter;
  } else if (family == "permuted_jitter") {
    c.family = Perturbation::permuted_jitter;
  } else if (family == "code_jitter") {
    c.family = Perturbation::code_jitter;
  } else {
    throw ParseError("unknown perturbation family '" + family + "'");
  }
  return c;
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& c) {
  return {{"m", c.m},
          {"n", c.n},
          {"k", c.k},
          {"hypergraph", kind_name(c.hypergraph)},
          {"per_support", c.per_support},
          {"eps_grid", c.eps_grid},
          {"eps_relative", c.eps_relative},
          {"trials", c.trials},
          {"seed", c.seed},
          {"family", family_name(c.family)},
          {"slack", c.slack}};
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = Clock::now();
  const Hypergraph h = build_hypergraph(config.hypergraph, config.m, config.k);
  ExperimentSummary summary;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(t);
    const Instance inst =
        generate_instance(config.m, config.n, config.k, h, config.per_support, seed);
    const StabilityCertificate cert = certify(inst.dictionary, inst.codes, h);
    if (!cert.dictionary_certified()) {
      throw HypothesisError("experiment: generated instance failed certification");
    }
    ++summary.instances;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (double value : config.eps_grid) {
      const double target = config.eps_relative ? value * *cert.eps_max_dictionary : value;
      if (!(target < *cert.eps_max_dictionary)) {
        ++summary.skipped_above_threshold;
        continue;
      }
      const auto began = Clock::now();
      const Candidate cand = perturb(inst.dictionary, inst.codes, config.family, target, rng);
      const Eigen::MatrixXd residual =
          inst.dictionary * inst.codes.codes() - cand.b * cand.codes_bar.codes();
      const double realized = residual.cols() ? residual.colwise().norm().maxCoeff() : 0.0;
      if (!(realized < *cert.eps_max_dictionary)) {
        ++summary.skipped_above_threshold;
        continue;
      }
      const Theorem1Report rep = verify_theorem1(inst.dictionary, inst.codes, cand.b,
                                                 cand.codes_bar, cert, realized, config.slack);
      ExperimentRecord rec;
      rec.seed = seed;
      rec.target_eps = target;
      rec.eps = realized;
      rec.max_col_err = rep.max_column_error;
      rec.bound5 = rep.column_bound;
      rec.pass5 = rep.column_ok;
      rec.c1 = *cert.C1;
      if (rep.codes_checked) {
        std::size_t tightest = 0;
        for (std::size_t i = 1; i < rep.code_errors.size(); ++i) {
          if (rep.code_bounds[i] - rep.code_errors[i] <
              rep.code_bounds[tightest] - rep.code_errors[tightest]) {
            tightest = i;
          }
        }
        rec.max_code_err = rep.code_errors[tightest];
        rec.bound6 = rep.code_bounds[tightest];
        rec.pass6 = rep.codes_ok;
        rec.lower_bound_ok = rep.lower_bound_ok;
      }
      rec.ms = elapsed_ms(began);
      summary.records.push_back(rec);
    }
  }

  std::sort(summary.records.begin(), summary.records.end(),
            [](const ExperimentRecord& x, const ExperimentRecord& y) {
              return std::tie(x.seed, x.eps) < std::tie(y.seed, y.eps);
            });
  double num = 0.0, den = 0.0;
  for (const auto& r : summary.records) {
    if (r.pass5) ++summary.pass5;
    if (r.pass6) {
      ++summary.checked6;
      if (*r.pass6) ++summary.pass6;
    }
    if (!r.lower_bound_ok) ++summary.lower_bound_failures;
    num += r.max_col_err * r.eps;
    den += r.eps * r.eps;
    if (r.bound5 > 0.0) {
      summary.max_bound_ratio = std::max(summary.max_bound_ratio, r.max_col_err / r.bound5);
    }
  }
  summary.slope = den > 0.0 ? num / den : 0.0;
  summary.seconds = elapsed_ms(start) / 1000.0;
  return summary;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "seed,eps,max_col_err,bound5,max_code_err,bound6,pass5,pass6,ms\n";
  char buf[512];
  auto num = [](const std::optional<double>& v) -> std::string {
    if (!v) return "NA";
    char b[32];
    std::snprintf(b, sizeof b, "%.17g", *v);
    return b;
  };
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%s,%s,%d,%s,%.3f\n",
                  static_cast<unsigned long long>(r.seed), r.eps, r.max_col_err, r.bound5,
                  num(r.max_code_err).c_str(), num(r.bound6).c_str(), r.pass5 ? 1 : 0,
                  r.pass6 ? (*r.pass6 ? "1" : "0") : "NA", r.ms);
    out += buf;
  }
  return out;
}

nlohmann::json summary_to_json(const ExperimentSummary& s) {
  return {{"records", s.records.size()},
          {"instances", s.instances},
          {"skipped_above_threshold", s.skipped_above_threshold},
          {"pass5", s.pass5},
          {"checked6", s.checked6},
          {"pass6", s.pass6},
          {"lower_bound_failures", s.lower_bound_failures},
          {"slope", s.slope},
          {"max_bound_ratio", s.max_bound_ratio},
          {"seconds", s.seconds}};
}

}  // namespace sparsecert
