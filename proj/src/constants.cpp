#include "sparsecert/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sparsecert/errors.hpp"
#include "sparsecert/lower_bound.hpp"

namespace sparsecert {

namespace {

std::string describe(const SupportSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.indices[i] + 1);
  }
  return out + "}";
}

double max_column_norm(const Eigen::MatrixXd& a) {
  return a.colwise().norm().maxCoeff();
}

// max over G in C(H, r) u C(H, r+1) of xi of the column spans indexed by G.
// xi is not monotone under taking subcollections (three lines in R^3 give a
// counterexample), so the r-subsets are scanned explicitly.
double max_xi(const Eigen::MatrixXd& a, const Hypergraph& h, int r,
              const ConstantsOptions& options) {
  std::vector<Subspace> spans;
  for (const auto& s : h.edges()) {
    spans.push_back(orthonormal_basis(select_columns(a, s), options.rank_tol));
    if (spans.back().dim() != static_cast<int>(s.size())) {
      throw HypothesisError("columns " + describe(s) + " are linearly dependent");
    }
  }
  double worst = 0.0;
  for (const auto group : {static_cast<std::size_t>(r), static_cast<std::size_t>(r) + 1}) {
    if (group < 2 || group > spans.size()) continue;
    require_combinations_within(spans.size(), group, options.cap, "compute_C2");
    for_each_combination(spans.size(), group, [&](const std::vector<int>& g) {
      std::vector<Subspace> members;
      for (int idx : g) members.push_back(spans[idx]);
      worst = std::max(worst, xi(members, options.rank_tol, options.ordering_cap));
      return true;
    });
  }
  return worst;
}

int require_regular_sip(const Hypergraph& h) {
  const auto r = regularity(h);
  if (!r) throw HypothesisError("hypergraph is not regular");
  if (!has_sip(h)) throw HypothesisError("hypergraph lacks the singleton intersection property");
  return *r;
}

bool positive_l2h(const Eigen::MatrixXd& a, const Hypergraph& h, double rank_tol,
                  double* value) {
  const Hypergraph unions = pairwise_unions(h);
  *value = restricted_lower_bound(a, unions);
  int widest = 1;
  for (const auto& s : unions.edges()) widest = std::max(widest, static_cast<int>(s.size()));
  return *value > spark_threshold(a, widest, rank_tol);
}

}  // namespace

double compute_C2(const Eigen::MatrixXd& a, const Hypergraph& h,
                  const ConstantsOptions& options) {
  if (a.cols() != h.vertex_count()) {
    throw std::invalid_argument("compute_C2: dictionary has " + std::to_string(a.cols()) +
                                " columns but hypergraph has " +
                                std::to_string(h.vertex_count()) + " vertices");
  }
  const int r = require_regular_sip(h);
  double l2h = 0.0;
  if (!positive_l2h(a, h, options.rank_tol, &l2h)) {
    throw HypothesisError("L_2H(A) is not positive");
  }
  const double denominator = 1.0 - max_xi(a, h, r, options);
  if (!(denominator > 0.0)) {
    throw HypothesisError("compute_C2: xi reached 1, geometry is degenerate");
  }
  return (r + 1) * max_column_norm(a) / denominator;
}

double c1_denominator(const Eigen::MatrixXd& a, const SparseCodeSet& codes, const Hypergraph& h,
                      const ConstantsOptions& options) {
  const auto k = h.uniform_size();
  if (!k) throw std::invalid_argument("compute_C1: hypergraph must be uniform");
  if (a.cols() != codes.dimension()) {
    throw std::invalid_argument("compute_C1: dictionary and codes disagree on m");
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [s, members] : support_index_sets(codes, h)) {
    if (static_cast<int>(members.size()) < *k) {
      throw HypothesisError("support " + describe(s) + " has " +
                            std::to_string(members.size()) + " codes, fewer than k");
    }
    Eigen::MatrixXd signals(a.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) {
      signals.col(static_cast<Eigen::Index>(j)) = a * codes.codes().col(members[j]);
    }
    lowest = std::min(lowest, lower_bound_k(signals, *k, options.cap));
  }
  return lowest;
}

double compute_C1(const Eigen::MatrixXd& a, const SparseCodeSet& codes, const Hypergraph& h,
                  const ConstantsOptions& options) {
  const double c2 = compute_C2(a, h, options);
  const double denominator = c1_denominator(a, codes, h, options);
  if (!(denominator > options.denominator_tol)) {
    throw HypothesisError("compute_C1: codes are not in general linear position (denominator " +
                          std::to_string(denominator) + ")");
  }
  return c2 / denominator;
}

double epsilon_for(double delta1, double delta2, double c1, double l2k, double max_l1) {
  if (delta1 < 0 || delta2 < 0 || max_l1 < 0) {
    throw std::invalid_argument("epsilon_for: negative input");
  }
  if (!(c1 > 0) || !(l2k > 0)) throw std::invalid_argument("epsilon_for: need C1 > 0, L2k > 0");
  const double dictionary_branch = delta1 / c1;
  if (std::isinf(delta2)) return dictionary_branch;
  const double code_branch = delta2 * l2k / (1.0 + c1 * (delta2 + max_l1));
  return std::min(dictionary_branch, code_branch);
}

double epsilon_for(const StabilityCertificate& cert, double delta1, double delta2) {
  if (!cert.eps_max_codes || !cert.C1) {
    throw HypothesisError("certificate does not cover code recovery");
  }
  return epsilon_for(delta1, delta2, *cert.C1, cert.L2k, cert.max_code_l1);
}

BigInt sample_size_cor1(int m, int k, const Hypergraph& h) {
  if (h.uniform_size() != k) throw std::invalid_argument("sample_size_cor1: H must be k-uniform");
  return BigInt(h.edge_count()) * (BigInt(k - 1) * binomial(m, k) + 1);
}

SampleSize sample_size_thm2(int m_bar, int k, std::size_t edge_count) {
  if (m_bar < 1 || k < 1) throw std::invalid_argument("sample_size_thm2: need m_bar, k >= 1");
  SampleSize out;
  out.per_support = BigInt(k - 1) * (binomial(m_bar, k) +
                                     BigInt(edge_count) * k * binomial(m_bar, k - 1)) +
                    1;
  out.total = BigInt(edge_count) * out.per_support;
  return out;
}

StabilityCertificate certify(const Eigen::MatrixXd& a, const SparseCodeSet& codes,
                             const Hypergraph& h, const ConstantsOptions& options) {
  StabilityCertificate cert;
  cert.n = static_cast<int>(a.rows());
  cert.m = static_cast<int>(a.cols());
  cert.edge_count = h.edge_count();
  cert.code_count = static_cast<std::size_t>(codes.count());
  if (a.cols() != h.vertex_count() || a.cols() != codes.dimension()) {
    throw std::invalid_argument("certify: dictionary, codes and hypergraph disagree on m");
  }
  if (!a.allFinite()) throw std::invalid_argument("certify: dictionary has non-finite entries");
  if (!h.uniform_size()) throw std::invalid_argument("certify: hypergraph must be uniform");
  cert.k = *h.uniform_size();
  const int k = cert.k;
  if (k >= cert.m) cert.notes.push_back("k must be smaller than m");

  cert.max_column_norm = max_column_norm(a);
  cert.max_code_l1 = codes.max_l1();
  cert.L2 = cert.m >= 2 ? lower_bound_k(a, 2, options.cap) : 0.0;
  cert.L2k = lower_bound_k(a, std::min(2 * k, cert.m), options.cap);

  cert.sip_ok = has_sip(h);
  if (!cert.sip_ok) cert.notes.push_back("hypergraph lacks the singleton intersection property");
  cert.r = regularity(h);
  cert.regular_ok = cert.r.has_value();
  if (!cert.regular_ok) cert.notes.push_back("hypergraph is not regular");
  cert.l2h_ok = positive_l2h(a, h, options.rank_tol, &cert.L2H);
  if (!cert.l2h_ok) cert.notes.push_back("L_2H(A) is not positive");
  cert.spark_ok = spark_condition(a, k, options.rank_tol, options.cap);
  if (!cert.spark_ok) {
    cert.notes.push_back("spark condition fails; code recovery is not certified");
  }

  cert.required_per_support = default_per_support_count(cert.m, k);
  cert.glp_ok = true;
  cert.counts_ok = true;
  for (const auto& [s, members] : support_index_sets(codes, h)) {
    SupportCount entry{s, static_cast<int>(members.size()), false};
    if (!members.empty()) {
      Eigen::MatrixXd block(codes.dimension(), static_cast<Eigen::Index>(members.size()));
      for (std::size_t j = 0; j < members.size(); ++j) {
        block.col(static_cast<Eigen::Index>(j)) = codes.codes().col(members[j]);
      }
      GeneralPositionOptions glp;
      glp.rank_tol = options.rank_tol;
      glp.cap = options.cap;
      entry.general_position =
          static_cast<int>(members.size()) >= k &&
          check_general_position(block, k, glp).in_general_position;
    }
    if (!entry.general_position) {
      cert.glp_ok = false;
      cert.notes.push_back("codes on " + describe(s) + " are not in general linear position");
    }
    if (entry.count < cert.required_per_support) {
      cert.counts_ok = false;
      cert.notes.push_back("support " + describe(s) + " has " + std::to_string(entry.count) +
                           " codes, needs " + std::to_string(cert.required_per_support));
    }
    cert.supports.push_back(std::move(entry));
  }

  if (cert.sip_ok && cert.regular_ok && cert.l2h_ok) {
    try {
      cert.max_xi = max_xi(a, h, *cert.r, options);
      if (1.0 - *cert.max_xi > 0.0) {
        cert.C2 = (*cert.r + 1) * cert.max_column_norm / (1.0 - *cert.max_xi);
      } else {
        cert.notes.push_back("xi reached 1, geometry is degenerate");
      }
    } catch (const HypothesisError& e) {
      cert.notes.push_back(e.what());
    } catch (const CapExceeded& e) {
      cert.notes.push_back(e.what());
    }
  }
  if (cert.C2 && cert.glp_ok) {
    const double denominator = c1_denominator(a, codes, h, options);
    if (denominator > options.denominator_tol) {
      cert.C1 = *cert.C2 / denominator;
      cert.eps_max_dictionary = cert.L2 / *cert.C1;
      if (cert.spark_ok) cert.eps_max_codes = cert.L2k / *cert.C1;
    } else {
      cert.glp_ok = false;
      cert.notes.push_back("C1 denominator below tolerance");
    }
  }
  return cert;
}

}  // namespace sparsecert
