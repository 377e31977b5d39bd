#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <limits>

#include "sparsecert/codes.hpp"
#include "sparsecert/constants.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/io.hpp"
#include "test_util.hpp"

using namespace sparsecert;
using nlohmann::json;

namespace {

bool bit_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sparsecert_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(MatrixJson, BitExactRoundTrip) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd m = testutil::gaussian(1 + t % 5, 1 + t % 7, rng);
    m(0, 0) = std::pow(10.0, (t % 40) - 20) / 3.0;
    if (t == 3) m(0, 0) = std::numeric_limits<double>::denorm_min();
    if (t == 4) m(0, 0) = -0.0;
    const std::string text = io::matrix_to_json(m).dump();
    EXPECT_TRUE(bit_equal(io::matrix_from_json(json::parse(text)), m)) << text;
  }
}

TEST(MatrixJson, RowMajorLayout) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const json j = io::matrix_to_json(m);
  EXPECT_EQ(j.at("rows"), 2);
  EXPECT_EQ(j.at("cols"), 3);
  EXPECT_EQ(j.at("data"), json({1.0, 2.0, 3.0, 4.0, 5.0, 6.0}));
}

TEST(MatrixJson, RejectsMalformed) {
  EXPECT_THROW(io::matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}}),
               ParseError);
  EXPECT_THROW(io::matrix_from_json(json{{"rows", 1}, {"cols", 1}, {"data", {"x"}}}), ParseError);
  EXPECT_THROW(io::matrix_from_json(json::array()), ParseError);
}

TEST(MatrixCsv, RoundTrip) {
  std::mt19937_64 rng(62);
  const Eigen::MatrixXd m = testutil::gaussian(4, 3, rng);
  EXPECT_TRUE(bit_equal(io::matrix_from_csv(io::matrix_to_csv(m)), m));
  EXPECT_EQ(io::matrix_from_csv("1,2\r\n3,4\n\n"), (Eigen::MatrixXd(2, 2) << 1, 2, 3, 4).finished());
  EXPECT_THROW(io::matrix_from_csv("1,2\n3\n"), ParseError);
  EXPECT_THROW(io::matrix_from_csv("1,abc\n"), ParseError);
  EXPECT_THROW(io::matrix_from_csv(""), ParseError);
}

TEST(HypergraphJson, OneBasedRoundTrip) {
  const Hypergraph h = build_cyclic(5, 2);
  const json j = io::hypergraph_to_json(h);
  EXPECT_EQ(j.at("m"), 5);
  EXPECT_EQ(j.at("edges")[0], json({1, 2}));
  const Hypergraph back = io::hypergraph_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.edges(), h.edges());
  EXPECT_THROW(io::hypergraph_from_json(json{{"m", 3}, {"edges", {{0, 1}}}}), ParseError);
  EXPECT_THROW(io::hypergraph_from_json(json{{"m", 3}, {"edges", {{1, 4}}}}), ParseError);
  EXPECT_THROW(io::hypergraph_from_json(json{{"edges", json::array()}}), ParseError);
}

TEST(CodesJson, RoundTrip) {
  const SparseCodeSet a = vandermonde_codes(4, SupportSet({1, 3}), 5, {0.7, 1.3});
  const json j = io::codes_to_json(a);
  EXPECT_EQ(j.at("supports")[0], json({2, 4}));
  const SparseCodeSet b = io::codes_from_json(json::parse(j.dump()));
  EXPECT_EQ(b.sparsity(), 2);
  EXPECT_TRUE(bit_equal(b.codes(), a.codes()));
  EXPECT_EQ(b.supports(), a.supports());
  json bad = j;
  bad["supports"][0] = {1};
  EXPECT_THROW(io::codes_from_json(bad), ParseError);
}

TEST(Files, LoadByExtension) {
  std::mt19937_64 rng(63);
  const Eigen::MatrixXd m = testutil::gaussian(3, 3, rng);
  const auto js = scratch("m.json");
  const auto csv = scratch("m.csv");
  io::write_file(js.string(), io::matrix_to_json(m).dump());
  io::write_file(csv.string(), io::matrix_to_csv(m));
  EXPECT_TRUE(bit_equal(io::load_matrix(js.string()), m));
  EXPECT_TRUE(bit_equal(io::load_matrix(csv.string()), m));

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 2);
  x(0, 0) = 1.0;
  x(1, 1) = 2.0;
  x(2, 1) = 3.0;
  const auto xcsv = scratch("x.csv");
  io::write_file(xcsv.string(), io::matrix_to_csv(x));
  const SparseCodeSet codes = io::load_codes(xcsv.string());
  EXPECT_EQ(codes.sparsity(), 2);
  EXPECT_EQ(codes.supports()[1], SupportSet({1, 2}));

  EXPECT_THROW(io::read_file(scratch("missing.json").string()), ParseError);
  const auto broken = scratch("broken.json");
  io::write_file(broken.string(), "{not json");
  EXPECT_THROW(io::load_hypergraph(broken.string()), ParseError);
}

TEST(Certificate, SerializesFlagsAndOptionalFields) {
  const Hypergraph h = build_cyclic(4, 2);
  const Instance inst = generate_instance(4, 4, 2, h, 7, 9);
  const json j = io::certificate_to_json(certify(inst.dictionary, inst.codes, h));
  EXPECT_EQ(j.at("version"), io::kToolkitVersion);
  EXPECT_TRUE(j.at("dictionary_certified").get<bool>());
  EXPECT_TRUE(j.at("flags").at("spark_ok").get<bool>());
  EXPECT_TRUE(j.at("C1").is_number());
  EXPECT_TRUE(j.at("m_bar").is_null());

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  const json fail = io::certificate_to_json(certify(a, inst.codes.subset({0, 1}), h));
  EXPECT_FALSE(fail.at("dictionary_certified").get<bool>());
  EXPECT_TRUE(fail.at("C1").is_null());
  EXPECT_FALSE(fail.at("notes").empty());
}

TEST(GroundTruth, DeterministicBytes) {
  const Hypergraph h = build_cyclic(4, 2);
  const Instance inst = generate_instance(4, 4, 2, h, 7, 10);
  const std::string one =
      io::ground_truth_to_json(synthesize_dataset(inst.dictionary, inst.codes, 0.01, 3)).dump();
  const std::string two =
      io::ground_truth_to_json(synthesize_dataset(inst.dictionary, inst.codes, 0.01, 3)).dump();
  EXPECT_EQ(one, two);
  const json j = json::parse(one);
  EXPECT_TRUE(bit_equal(io::matrix_from_json(j.at("dictionary")), inst.dictionary));
  EXPECT_EQ(j.at("seed"), 3);
}

TEST(Digest, Fnv1a) {
  EXPECT_EQ(io::digest(""), "cbf29ce484222325");
  EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
  EXPECT_NE(io::digest("ab"), io::digest("ba"));
}
