#include "cylq/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace cylq {

namespace {

using nlohmann::json;

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) throw FormatError(std::string("expected a number for ") + what);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError(std::string("non-finite value for ") + what);
  return x;
}

int nonnegative_int(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) throw FormatError(std::string("missing integer field ") + key);
  const auto v = j.at(key).get<long long>();
  if (v < 0 || v > 100000) throw FormatError(std::string("field out of range: ") + key);
  return static_cast<int>(v);
}

FiberParams read_fiber(const json& j) {
  for (const char* key : {"a", "k", "hbar"}) {
    if (!j.contains(key)) throw FormatError(std::string("missing field ") + key);
  }
  try {
    return FiberParams(finite_number(j.at("a"), "a"), finite_number(j.at("k"), "k"), finite_number(j.at("hbar"), "hbar"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void expect_kind(const json& j, const char* kind) {
  if (!j.is_object() || !j.contains("kind") || j.at("kind") != kind) throw FormatError(std::string("expected kind ") + kind);
}

const json& entries(const json& j, std::size_t count) {
  if (!j.contains("entries") || !j.at("entries").is_array()) throw FormatError("missing entries array");
  const json& e = j.at("entries");
  if (e.size() != count) throw FormatError("entries has " + std::to_string(e.size()) + " items, expected " + std::to_string(count));
  return e;
}

cplx read_pair(const json& v) {
  if (!v.is_array() || v.size() != 2) throw FormatError("entry is not an [re, im] pair");
  return {finite_number(v[0], "entry"), finite_number(v[1], "entry")};
}

}  // namespace

json to_json(const CircleOperator& op) {
  const FiberParams& fp = op.fiber();
  json e = json::array();
  for (int mr = -op.band(); mr <= op.band(); ++mr) {
    for (int mc = -op.band(); mc <= op.band(); ++mc) e.push_back(complex_pair(op.entry(mr, mc)));
  }
  return json{{"kind", "CircleOperator"}, {"a", fp.a}, {"k", fp.k}, {"hbar", fp.hbar}, {"N", op.band()}, {"entries", std::move(e)}};
}

json to_json(const WeylSymbol& F) {
  const FiberParams& fp = F.fiber();
  json e = json::array();
  for (int n = -F.n_max(); n <= F.n_max(); ++n) {
    for (int r = -F.r_max(); r <= F.r_max(); ++r) e.push_back(complex_pair(F.coeff(r, n)));
  }
  return json{{"kind", "WeylSymbol"}, {"a", fp.a},         {"k", fp.k},           {"hbar", fp.hbar},
              {"n_max", F.n_max()},   {"r_max", F.r_max()}, {"entries", std::move(e)}};
}

CircleOperator operator_from_json(const json& j) {
  expect_kind(j, "CircleOperator");
  const FiberParams fp = read_fiber(j);
  const int N = nonnegative_int(j, "N");
  const int d = 2 * N + 1;
  const json& e = entries(j, static_cast<std::size_t>(d) * d);
  CircleOperator op(fp, N);
  for (int i = 0; i < d; ++i) {
    for (int l = 0; l < d; ++l) op.matrix()(i, l) = read_pair(e[static_cast<std::size_t>(i) * d + l]);
  }
  return op;
}

WeylSymbol symbol_from_json(const json& j) {
  expect_kind(j, "WeylSymbol");
  const FiberParams fp = read_fiber(j);
  const int n_max = nonnegative_int(j, "n_max");
  const int r_max = nonnegative_int(j, "r_max");
  const int rows = 2 * n_max + 1, cols = 2 * r_max + 1;
  const json& e = entries(j, static_cast<std::size_t>(rows) * cols);
  WeylSymbol F(fp, n_max, r_max);
  for (int n = -n_max; n <= n_max; ++n) {
    for (int r = -r_max; r <= r_max; ++r) {
      const cplx v = read_pair(e[static_cast<std::size_t>(n + n_max) * cols + (r + r_max)]);
      if ((r - n) % 2 != 0) {
        if (v != cplx{}) throw FormatError("nonzero coefficient with r and n of different parity");
        continue;
      }
      F.set_coeff(r, n, v);
    }
  }
  return F;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "hbar,band,norm,f_re,f_im,shift_re,shift_im,momentum_re,momentum_im,bracket_re,bracket_im,"
         "norm_error,f_error,shift_error,momentum_error,bracket_error\n";
  for (const SweepRow& r : rows) {
    const double cells[] = {r.norm,           r.f.real(),       r.f.imag(),        r.shift.real(),
                            r.shift.imag(),   r.momentum.real(), r.momentum.imag(), r.bracket.real(),
                            r.bracket.imag(), r.norm_error,      r.f_error,         r.shift_error,
                            r.momentum_error, r.bracket_error};
    out << format_double(r.hbar) << ',' << r.band;
    for (double c : cells) out << ',' << format_double(c);
    out << '\n';
  }
  return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto " + path.string());
  }
}

}  // namespace cylq
