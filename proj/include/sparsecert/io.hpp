#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "sparsecert/alignment.hpp"
#include "sparsecert/codes.hpp"
#include "sparsecert/constants.hpp"
#include "sparsecert/hypergraph.hpp"

namespace sparsecert::io {

using nlohmann::json;

inline constexpr const char* kToolkitVersion = "0.1.0";

// Matrices: {"rows": n, "cols": m, "data": [row-major entries]}. Doubles are
// written in shortest round-trip form, so reading back is bit-exact.
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

/// Row-major CSV, one matrix row per line, 17 significant digits.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

// Hypergraphs: {"m": int, "edges": [[1-based vertices], ...]}.
json hypergraph_to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const json& j);

// Codes: {"k": int, "codes": <matrix>, "supports": [[1-based], ...]}.
json codes_to_json(const SparseCodeSet& codes);
SparseCodeSet codes_from_json(const json& j);

json certificate_to_json(const StabilityCertificate& cert);
json alignment_to_json(const AlignmentResult& alignment);
json theorem1_report_to_json(const Theorem1Report& report);

/// Dictionary, codes, supports, noise, eta and seed of a synthesized dataset.
json ground_truth_to_json(const Dataset& data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Matrix from a .json file or, for any other extension, CSV.
Eigen::MatrixXd load_matrix(const std::string& path);
/// Codes from a .json codes file or a CSV matrix (supports from nonzeros,
/// k = largest support).
SparseCodeSet load_codes(const std::string& path);
Hypergraph load_hypergraph(const std::string& path);

/// 64-bit FNV-1a digest, hex encoded.
std::string digest(const std::string& bytes);

}  // namespace sparsecert::io
