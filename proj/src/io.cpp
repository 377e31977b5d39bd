#include "sparsecert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sparsecert/errors.hpp"

namespace sparsecert::io {

namespace {

json support_to_json(const SupportSet& s) {
  json out = json::array();
  for (int v : s.indices) out.push_back(v + 1);
  return out;
}

SupportSet support_from_json(const json& j, int m) {
  if (!j.is_array()) throw ParseError("support must be an array of vertex indices");
  std::vector<int> idx;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError("vertex index must be an integer");
    const int vertex = v.get<int>();
    if (vertex < 1 || vertex > m) {
      throw ParseError("vertex " + std::to_string(vertex) + " outside [1, " +
                       std::to_string(m) + "]");
    }
    idx.push_back(vertex - 1);
  }
  return SupportSet(std::move(idx));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json int_list(const std::vector<int>& v, int offset = 1) {
  json out = json::array();
  for (int x : v) out.push_back(x + offset);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw ParseError("matrix JSON needs rows, cols and data");
  }
  const auto rows = j.at("rows").get<long>();
  const auto cols = j.at("cols").get<long>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      static_cast<long>(data.size()) != rows * cols) {
    throw ParseError("matrix JSON data does not hold rows * cols entries");
  }
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long c = 0; c < cols; ++c) {
      const auto& v = data[static_cast<std::size_t>(i * cols + c)];
      if (!v.is_number()) throw ParseError("matrix entry is not a number");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("CSV cell is not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("CSV rows have different lengths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV holds no rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

json hypergraph_to_json(const Hypergraph& h) {
  json edges = json::array();
  for (const auto& e : h.edges()) edges.push_back(support_to_json(e));
  return json{{"m", h.vertex_count()}, {"edges", std::move(edges)}};
}

Hypergraph hypergraph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("edges")) {
    throw ParseError("hypergraph JSON needs m and edges");
  }
  if (!j.at("m").is_number_integer() || !j.at("edges").is_array()) {
    throw ParseError("hypergraph JSON: m must be an integer and edges an array");
  }
  const int m = j.at("m").get<int>();
  if (m < 1) throw ParseError("hypergraph JSON: m must be positive");
  std::vector<SupportSet> edges;
  for (const auto& e : j.at("edges")) edges.push_back(support_from_json(e, m));
  return Hypergraph(m, std::move(edges));
}

json codes_to_json(const SparseCodeSet& codes) {
  json supports = json::array();
  for (const auto& s : codes.supports()) supports.push_back(support_to_json(s));
  return json{{"k", codes.sparsity()},
              {"codes", matrix_to_json(codes.codes())},
              {"supports", std::move(supports)}};
}

SparseCodeSet codes_from_json(const json& j) {
  if (!j.is_object() || !j.contains("k") || !j.contains("codes")) {
    throw ParseError("codes JSON needs k and codes");
  }
  const int k = j.at("k").get<int>();
  Eigen::MatrixXd x = matrix_from_json(j.at("codes"));
  try {
    if (!j.contains("supports")) return SparseCodeSet::from_matrix(k, std::move(x));
    std::vector<SupportSet> supports;
    for (const auto& s : j.at("supports")) {
      supports.push_back(support_from_json(s, static_cast<int>(x.rows())));
    }
    return SparseCodeSet(k, std::move(x), std::move(supports));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("codes JSON: ") + e.what());
  }
}

json certificate_to_json(const StabilityCertificate& cert) {
  json supports = json::array();
  for (const auto& s : cert.supports) {
    supports.push_back(json{{"support", support_to_json(s.support)},
                            {"count", s.count},
                            {"general_position", s.general_position}});
  }
  return json{
      {"m", cert.m},
      {"n", cert.n},
      {"k", cert.k},
      {"m_bar", cert.m_bar ? json(*cert.m_bar) : json(nullptr)},
      {"r", cert.r ? json(*cert.r) : json(nullptr)},
      {"edge_count", cert.edge_count},
      {"code_count", cert.code_count},
      {"L2", cert.L2},
      {"L2k", cert.L2k},
      {"L2H", cert.L2H},
      {"max_column_norm", cert.max_column_norm},
      {"max_code_l1", cert.max_code_l1},
      {"max_xi", optional_number(cert.max_xi)},
      {"C2", optional_number(cert.C2)},
      {"C1", optional_number(cert.C1)},
      {"eps_max_dictionary", optional_number(cert.eps_max_dictionary)},
      {"eps_max_codes", optional_number(cert.eps_max_codes)},
      {"required_per_support", cert.required_per_support},
      {"supports", std::move(supports)},
      {"flags",
       {{"sip_ok", cert.sip_ok},
        {"regular_ok", cert.regular_ok},
        {"l2h_ok", cert.l2h_ok},
        {"glp_ok", cert.glp_ok},
        {"spark_ok", cert.spark_ok},
        {"counts_ok", cert.counts_ok}}},
      {"dictionary_certified", cert.dictionary_certified()},
      {"notes", cert.notes},
      {"version", kToolkitVersion},
  };
}

json alignment_to_json(const AlignmentResult& al) {
  json pairs = json::array();
  for (std::size_t t = 0; t < al.matched(); ++t) {
    pairs.push_back(json{{"source", al.sources[t] + 1},
                         {"target", al.targets[t] + 1},
                         {"scale", al.scales[t]},
                         {"error", al.column_errors[t]}});
  }
  return json{{"pairs", std::move(pairs)},
              {"max_column_error", al.max_column_error},
              {"unmatched_sources", int_list(al.unmatched_sources)},
              {"unmatched_targets", int_list(al.unmatched_targets)}};
}

json theorem1_report_to_json(const Theorem1Report& rep) {
  return json{
      {"eps", rep.eps},
      {"slack", rep.slack},
      {"residuals", rep.residuals},
      {"max_residual", rep.max_residual},
      {"m", rep.m},
      {"m_bar", rep.m_bar},
      {"m_bar_ok", rep.m_bar_ok},
      {"required_matched", rep.required_matched ? json(*rep.required_matched) : json(nullptr)},
      {"alignment", alignment_to_json(rep.alignment)},
      {"certified_sources", int_list(rep.certified_sources)},
      {"max_column_error", rep.max_column_error},
      {"column_bound", rep.column_bound},
      {"column_ok", rep.column_ok},
      {"codes_checked", rep.codes_checked},
      {"code_errors", rep.code_errors},
      {"code_bounds", rep.code_bounds},
      {"max_code_error", rep.max_code_error},
      {"codes_ok", rep.codes_ok},
      {"lower_bound_after", optional_number(rep.lower_bound_after)},
      {"lower_bound_floor", rep.lower_bound_floor},
      {"lower_bound_ok", rep.lower_bound_ok},
      {"passed", rep.passed()},
  };
}

json ground_truth_to_json(const Dataset& data) {
  json out{{"eta", data.eta}, {"signals", matrix_to_json(data.signals)}};
  if (data.truth) {
    out["dictionary"] = matrix_to_json(data.truth->dictionary);
    out["codes"] = codes_to_json(data.truth->codes);
    out["noise"] = matrix_to_json(data.truth->noise);
    out["seed"] = data.truth->seed;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) return matrix_from_json(parse_json(text, path));
  return matrix_from_csv(text);
}

SparseCodeSet load_codes(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) return codes_from_json(parse_json(text, path));
  Eigen::MatrixXd x = matrix_from_csv(text);
  int k = 1;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    k = std::max(k, static_cast<int>(nonzero_support(x.col(i)).size()));
  }
  return SparseCodeSet::from_matrix(k, std::move(x));
}

Hypergraph load_hypergraph(const std::string& path) {
  try {
    return hypergraph_from_json(parse_json(read_file(path), path));
  } catch (const std::out_of_range& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sparsecert::io
