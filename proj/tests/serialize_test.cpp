#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cylq/serialize.hpp"
#include "test_support.hpp"

using namespace cylq;
using cylq::testing::make_rng;
using cylq::testing::random_hermitian;

namespace {

bool bit_equal(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(OperatorJson, LayoutIsRowMajorPairs) {
  const FiberParams fp(2.0, 0.25, 0.5);
  CircleOperator op(fp, 1);
  op.entry(-1, 0) = cplx{1.5, -2.0};
  op.entry(1, 1) = cplx{0.0, 3.0};
  const nlohmann::json j = to_json(op);
  EXPECT_EQ(j.at("kind"), "CircleOperator");
  EXPECT_EQ(j.at("N"), 1);
  EXPECT_EQ(j.at("a"), 2.0);
  EXPECT_EQ(j.at("k"), 0.25);
  EXPECT_EQ(j.at("hbar"), 0.5);
  ASSERT_EQ(j.at("entries").size(), 9u);
  EXPECT_EQ(j.at("entries")[1], nlohmann::json::array({1.5, -2.0}));  // row m' = -1, column m = 0
  EXPECT_EQ(j.at("entries")[8], nlohmann::json::array({0.0, 3.0}));
}

TEST(OperatorJson, RoundTripIsBitExact) {
  auto rng = make_rng(41);
  const FiberParams fp(kTwoPi, 0.1 / 3.0, 1.0 / 7.0);
  const CircleOperator op = random_hermitian(fp, 6, rng);
  const CircleOperator back = operator_from_json(nlohmann::json::parse(dump(to_json(op))));
  EXPECT_TRUE(back.fiber() == fp);
  ASSERT_EQ(back.band(), 6);
  for (Eigen::Index i = 0; i < op.matrix().size(); ++i) {
    EXPECT_TRUE(bit_equal(op.matrix()(i).real(), back.matrix()(i).real()));
    EXPECT_TRUE(bit_equal(op.matrix()(i).imag(), back.matrix()(i).imag()));
  }
  EXPECT_EQ(dump(to_json(back)), dump(to_json(op)));
}

TEST(OperatorJson, RejectsMalformedInput) {
  const FiberParams fp = FiberParams(kTwoPi, 0.0, 1.0);
  nlohmann::json j = to_json(CircleOperator::identity(fp, 2));
  nlohmann::json wrong_kind = j;
  wrong_kind["kind"] = "WeylSymbol";
  EXPECT_THROW(operator_from_json(wrong_kind), FormatError);
  nlohmann::json short_entries = j;
  short_entries["entries"].erase(0);
  EXPECT_THROW(operator_from_json(short_entries), FormatError);
  nlohmann::json bad_pair = j;
  bad_pair["entries"][0] = nlohmann::json::array({1.0});
  EXPECT_THROW(operator_from_json(bad_pair), FormatError);
  nlohmann::json bad_k = j;
  bad_k["k"] = 5.0;
  EXPECT_THROW(operator_from_json(bad_k), FormatError);
  nlohmann::json missing = j;
  missing.erase("hbar");
  EXPECT_THROW(operator_from_json(missing), FormatError);
}

TEST(SymbolJson, RoundTripIsBitExact) {
  auto rng = make_rng(42);
  const FiberParams fp(3.0, 0.2, 0.9);
  const WeylSymbol F = symbol_of_operator(random_hermitian(fp, 4, rng));
  const nlohmann::json j = to_json(F);
  EXPECT_EQ(j.at("n_max"), F.n_max());
  EXPECT_EQ(j.at("r_max"), F.r_max());
  const WeylSymbol back = symbol_from_json(nlohmann::json::parse(dump(j)));
  for (int n = -F.n_max(); n <= F.n_max(); ++n) {
    for (int r = -F.r_max(); r <= F.r_max(); ++r) {
      EXPECT_TRUE(bit_equal(F.coeff(r, n).real(), back.coeff(r, n).real()));
      EXPECT_TRUE(bit_equal(F.coeff(r, n).imag(), back.coeff(r, n).imag()));
    }
  }
}

TEST(SymbolJson, RejectsWrongParityEntry) {
  const FiberParams fp(kTwoPi, 0.0, 1.0);
  nlohmann::json j = to_json(WeylSymbol(fp, 1, 1));
  j["entries"][0] = nlohmann::json::array({1.0, 0.0});  // n = -1, r = -1: allowed
  EXPECT_NO_THROW(symbol_from_json(j));
  j["entries"][1] = nlohmann::json::array({1.0, 0.0});  // n = -1, r = 0: parity clash
  EXPECT_THROW(symbol_from_json(j), FormatError);
}

TEST(SweepCsv, HeaderAndRows) {
  SweepRow row;
  row.hbar = 0.5;
  row.band = 7;
  row.norm = 1.0;
  row.f = cplx{0.25, -0.0};
  row.shift_error = 1e-3;
  const std::string csv = sweep_csv({row});
  std::istringstream in(csv);
  std::string header, line, extra;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 15);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 15);
  EXPECT_EQ(line.substr(0, 12), "0.5,7,1,0.25");
  EXPECT_NE(line.find("0.001"), std::string::npos);
}

TEST(FormatDouble, ShortestStableForm) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
  EXPECT_EQ(std::stod(format_double(kPi)), kPi);
}

TEST(WriteAtomic, ReplacesFileWithoutLeftovers) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("cylq_write_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path target = dir / "op.json";
  write_atomic(target, "first\n");
  write_atomic(target, "second\n");
  EXPECT_EQ(slurp(target), "second\n");
  int files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1);
  EXPECT_THROW(write_atomic(dir / "missing" / "op.json", "x"), std::runtime_error);
  fs::remove_all(dir);
}
