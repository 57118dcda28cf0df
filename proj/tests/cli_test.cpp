#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cylq/expression.hpp"
#include "cylq/serialize.hpp"

using namespace cylq;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(CYLQ_TEST_TMPDIR) / "cli_scratch";
  fs::create_directories(dir);
  return dir / name;
}

// Arguments are passed through the shell; callers quote expressions themselves.
CliRun run(const std::string& args) {
  static int counter = 0;
  const std::string tag = std::to_string(::getpid()) + "." + std::to_string(counter++);
  const fs::path out = scratch("stdout." + tag);
  const fs::path err = scratch("stderr." + tag);
  const std::string cmd = std::string("\"") + CYLQ_BINARY + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST(CliQuantize, ConstantGivesIdentity) {
  const CliRun r = run("quantize --function 1 --band 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const CircleOperator op = operator_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(op.band(), 4);
  EXPECT_EQ(max_abs(op.matrix() - CMatrix::Identity(9, 9)), 0.0);
}

TEST(CliQuantize, MomentumGivesDiagonal) {
  const CliRun r = run("quantize --function p --band 4 --a 3 --k 0.5 --hbar 0.7");
  ASSERT_EQ(r.code, 0) << r.err;
  const CircleOperator op = operator_from_json(nlohmann::json::parse(r.out));
  const FiberParams fp(3.0, 0.5, 0.7);
  EXPECT_TRUE(op.fiber() == fp);
  EXPECT_LT(max_abs(op.matrix() - CircleOperator::momentum(fp, 4).matrix()), 1e-14);
}

TEST(CliQuantize, FileMatchesLibrarySerializationByteForByte) {
  const fs::path target = scratch("cosp.json");
  fs::remove(target);
  const CliRun r = run("quantize --function 'cos(q)·p' --out \"" + target.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const FiberParams fp(kTwoPi, 0.0, 1.0);
  const CylinderFunction f = CylinderFunction::sample(fp, 32, parse_expression("cos(q)*p").to_mode_function());
  EXPECT_EQ(slurp(target), dump(to_json(weyl_quantize(f, 16))));
}

TEST(CliQuantize, ParseFailureExitsTwoWithoutFile) {
  const fs::path target = scratch("bad.json");
  fs::remove(target);
  const CliRun r = run("quantize --function 'cos(p)' --out \"" + target.string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot parse"), std::string::npos);
  EXPECT_FALSE(fs::exists(target));
}

TEST(CliQuantize, BandOverflowExitsThreeWithoutFile) {
  const fs::path target = scratch("wide.json");
  fs::remove(target);
  const CliRun r = run("quantize --band 4 --function 'cos(9q)' --out \"" + target.string() + "\"");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("exceeds"), std::string::npos);
  EXPECT_FALSE(fs::exists(target));
}

TEST(CliQuantize, RerunIsByteIdentical) {
  const CliRun first = run("quantize --function 'p^2 + sin(2q)' --band 6");
  const CliRun second = run("quantize --function 'p^2 + sin(2q)' --band 6");
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(first.out, second.out);
}

TEST(CliVerify, TracesSuitePrintsParityTable) {
  const CliRun r = run("verify --suite traces");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("traces.quantizer_trace.n=+02"), std::string::npos);
  EXPECT_NE(r.out.find("tr=0"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliVerify, BridgeSuitePasses) {
  const CliRun r = run("verify --suite bridge");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS  bridge.three_routes"), std::string::npos);
}

TEST(CliVerify, SmallBandSkipsTrikernelWindow) {
  const CliRun r = run("verify --suite all --band 4 --grid 9");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("SKIP  trikernel.window"), std::string::npos);
}

TEST(CliVerify, OutputIsSortedAndDeterministic) {
  const CliRun first = run("verify --suite all");
  const CliRun second = run("verify --suite all");
  ASSERT_EQ(first.code, 0) << first.out;
  EXPECT_EQ(first.out, second.out);
  std::istringstream in(first.out);
  std::string line, previous;
  while (std::getline(in, line)) {
    if (line.size() < 6 || line[4] != ' ') continue;
    const std::string name = line.substr(6, line.find(' ', 6) - 6);
    EXPECT_LE(previous, name);
    previous = name;
  }
}

TEST(CliVerify, UnknownSuiteExitsTwo) {
  const CliRun r = run("verify --suite nonsense");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown suite"), std::string::npos);
}

TEST(CliSweep, DefaultsAreMonotoneAndDeterministic) {
  const CliRun r = run("sweep");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, run("sweep").out);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("hbar,band,norm,", 0), 0u);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    rows.push_back(cells);
  }
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t col = 11; col < 16; ++col) {
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i][col], rows[i - 1][col]) << "column " << col;
  }
}

TEST(CliSweep, SingleHbarGivesOneRow) {
  const CliRun r = run("sweep --hbar 0.5 --function 'cos(q)' --state 1.0,0.2,0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  EXPECT_EQ(r.out.substr(r.out.find('\n') + 1, 4), "0.5,");
}

TEST(CliSweep, ParseFailureExitsTwo) {
  EXPECT_EQ(run("sweep --function 'cos(q'").code, 2);
  EXPECT_EQ(run("sweep --state 1,2").code, 2);
}

TEST(CliConfig, FileValuesWithFlagOverrides) {
  const fs::path cfg = scratch("run.cfg");
  std::ofstream(cfg) << "# desk run\nband = 5\nhbar = 0.5\nfunction = p\n";
  const CliRun from_file = run("quantize --config \"" + cfg.string() + "\"");
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const CircleOperator op = operator_from_json(nlohmann::json::parse(from_file.out));
  EXPECT_EQ(op.band(), 5);
  EXPECT_EQ(op.fiber().hbar, 0.5);
  const CliRun overridden = run("quantize --config \"" + cfg.string() + "\" --band 4");
  ASSERT_EQ(overridden.code, 0);
  EXPECT_EQ(operator_from_json(nlohmann::json::parse(overridden.out)).band(), 4);
}

TEST(CliConfig, InvalidValuesExitTwo) {
  EXPECT_EQ(run("verify --band 3").code, 2);
  EXPECT_EQ(run("verify --band 8 --grid 16").code, 2);
  EXPECT_EQ(run("verify --hbar abc").code, 2);
  EXPECT_EQ(run("quantize --function p --format csv").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  const fs::path cfg = scratch("bad.cfg");
  std::ofstream(cfg) << "tol.trace = -1\n";
  EXPECT_EQ(run("verify --config \"" + cfg.string() + "\"").code, 2);
}

TEST(CliVerify, FailedCheckExitsOne) {
  const fs::path cfg = scratch("strict.cfg");
  std::ofstream(cfg) << "tol.pair_weak = 1e-300\n";
  const CliRun r = run("verify --suite traces --config \"" + cfg.string() + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL  traces.pair_weak.cos.N=16"), std::string::npos);
}

TEST(CliQuantize, UnwritableOutputExitsFour) {
  const CliRun r = run("quantize --function p --out \"" + scratch("missing_dir/op.json").string() + "\"");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}
