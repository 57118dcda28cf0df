#include "cylq/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "cylq/coherent.hpp"
#include "cylq/expression.hpp"
#include "cylq/pptt.hpp"

namespace cylq {

namespace {

using Checks = std::vector<CheckResult>;

CheckResult bounded(std::string name, double measured, double bound, std::string detail = {}) {
  const CheckStatus s = (measured <= bound) ? CheckStatus::pass : CheckStatus::fail;
  return {std::move(name), s, measured, bound, std::move(detail)};
}

std::string signed_index(const char* label, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s=%+03d", label, n);
  return buf;
}

cplx random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

CircleOperator random_hermitian(const FiberParams& fp, int N, std::mt19937_64& rng) {
  CMatrix A(2 * N + 1, 2 * N + 1);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = random_complex(rng);
  }
  return CircleOperator(fp, N, 0.5 * (A + A.adjoint()));
}

// Trigonometric polynomial in q of band B times a polynomial in p of degree <= 3,
// scaled by p_scale so that values stay O(1) over the lattice window.
CylinderFunction random_trig_poly(const FiberParams& fp, int B, int P, double p_scale, std::mt19937_64& rng) {
  std::vector<std::array<cplx, 4>> poly(2 * B + 1);
  for (auto& c : poly) {
    for (auto& v : c) v = random_complex(rng);
  }
  return CylinderFunction::sample(fp, B, P, [&](int m, double p) {
    const auto& c = poly[m + B];
    const double u = p / p_scale;
    return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
  });
}

FiberParams fiber_of(const RunConfig& cfg) { return FiberParams(cfg.a, cfg.k, cfg.hbar); }

std::mt19937_64 suite_rng(std::uint64_t salt) { return std::mt19937_64(run_seed() ^ (salt * 0x9E3779B97F4A7C15ULL)); }

void traces_suite(const RunConfig& cfg, Checks& out) {
  const FiberParams fp = fiber_of(cfg);
  const int N = cfg.N;
  for (int n = -8; n <= 8; ++n) {
    const double expected = 0.5 * (1.0 + parity_sign(n));
    double err = 0.0;
    for (int j = 0; j < 8; ++j) err = std::max(err, std::abs(trace_quantizer({j * fp.a / 8.0, n}, fp, N) - expected));
    out.push_back(bounded("traces.quantizer_trace." + signed_index("n", n), err, cfg.tolerance("trace"),
                          expected == 1.0 ? "tr=1" : "tr=0"));
  }

  double off = 0.0;
  for (int n = -8; n <= 8; ++n) {
    for (int m = -8; m <= 8; ++m) {
      if (n == m) continue;
      for (int j = 0; j < 8; ++j) off = std::max(off, std::abs(pair_trace({j * fp.a / 8.0, n}, {0.37 * fp.a, m}, fp, N)));
    }
  }
  out.push_back(bounded("traces.pair_offdiagonal_zero", off, 0.0, "exact"));

  const double x0 = 0.3 * fp.a;
  const std::pair<const char*, std::function<cplx(double)>> tests[] = {
      {"cos", [&](double y) { return cplx{std::cos(kTwoPi * y / fp.a), 0.0}; }},
      {"bump", [&](double y) { return cplx{std::exp(2.0 * (std::cos(kTwoPi * (y - x0) / fp.a) - 1.0)), 0.0}; }}};
  for (const auto& [label, g] : tests) {
    double previous = INFINITY;
    int violations = 0;
    double last = 0.0;
    for (int band : {4, 8, 16}) {
      last = pair_trace_weak_error(x0, 0, g, fp, band, 128);
      if (!(last < previous)) ++violations;
      previous = last;
    }
    out.push_back(bounded(std::string("traces.pair_weak.") + label + ".N=16", last, cfg.tolerance("pair_weak")));
    out.push_back(bounded(std::string("traces.pair_weak.") + label + ".monotone", violations, 0.0, "N=4,8,16"));
  }

  const TraceReport id = modified_trace_formulas(CircleOperator::identity(fp, N));
  const double dim = 2.0 * N + 1.0;
  const double id_err =
      std::max({std::abs(id.direct - dim), std::abs(id.doubled_x - dim), std::abs(id.even_n - dim)});
  out.push_back(bounded("traces.modified_trace.identity", id_err, cfg.tolerance("modified_trace")));

  auto rng = suite_rng(101);
  double spread = 0.0, pair_spread = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const CircleOperator A = random_hermitian(fp, N, rng), B = random_hermitian(fp, N, rng);
    spread = std::max(spread, modified_trace_formulas(A).spread());
    pair_spread = std::max(pair_spread, modified_trace_formulas(A, B).spread());
  }
  out.push_back(bounded("traces.modified_trace.random_hermitian", spread, cfg.tolerance("modified_trace")));
  out.push_back(bounded("traces.modified_trace.random_pair", pair_spread, cfg.tolerance("modified_trace")));

  const WeylSymbol unit = symbol_of_operator(CircleOperator::identity(fp, N));
  double unit_err = 0.0;
  for (int n = -2 * N; n <= 2 * N; ++n) {
    for (int j = 0; j < 8; ++j) {
      unit_err = std::max(unit_err, std::abs(unit.value(j * fp.a / 8.0, n) - (1.0 + parity_sign(n)) / (2.0 * fp.a)));
    }
  }
  out.push_back(bounded("traces.unit_symbol", unit_err, 0.0, "exact"));
}

void trikernel_suite(const RunConfig& cfg, Checks& out) {
  const FiberParams fp = fiber_of(cfg);
  const int N = cfg.N;
  auto rng = suite_rng(202);
  std::uniform_int_distribution<int> idx(-8, 8);
  std::uniform_real_distribution<double> pos(0.0, 2.0 * fp.a);
  double err = 0.0, odd = 0.0;
  int outside = 0, checked = 0, odd_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const QuantizerIndex u{pos(rng), idx(rng)}, v{pos(rng), idx(rng)}, w{pos(rng), idx(rng)};
    const bool in_band = std::abs(u.n) <= 2 * N && std::abs(v.n) <= 2 * N && std::abs(w.n) <= 2 * N;
    if (!in_band || !trikernel_in_window(u.n, v.n, w.n, N)) {
      ++outside;
      continue;
    }
    const cplx brute = (quantizer_matrix(u, fp, N) * quantizer_matrix(v, fp, N) * quantizer_matrix(w, fp, N)).trace();
    const cplx closed = trikernel(u, v, w, fp, N);
    if ((u.n - v.n + w.n) % 2 != 0) {
      odd = std::max({odd, std::abs(closed), std::abs(brute)});
      ++odd_count;
    } else {
      err = std::max(err, std::abs(closed - brute));
    }
    ++checked;
  }
  out.push_back(bounded("trikernel.closed_form", err, cfg.tolerance("trikernel"), std::to_string(checked) + " triples"));
  out.push_back(bounded("trikernel.odd_parity_zero", odd, 0.0, std::to_string(odd_count) + " triples, exact"));
  CheckResult window{"trikernel.window", CheckStatus::pass, double(outside), 0.0, "all 200 triples inside the window"};
  if (outside > 0) {
    window.status = CheckStatus::skip;
    window.detail = std::to_string(outside) + " of 200 triples outside the band-" + std::to_string(N) +
                    " window, skipped";
  }
  out.push_back(window);
}

void star_suite(const RunConfig& cfg, Checks& out) {
  const FiberParams fp = fiber_of(cfg);
  const int N = cfg.N;
  auto rng = suite_rng(303);

  double op_err = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const CircleOperator A = random_hermitian(fp, N, rng), B = random_hermitian(fp, N, rng);
    op_err = std::max(op_err, star_trikernel(symbol_of_operator(A), symbol_of_operator(B), N)
                                  .max_abs_diff(symbol_of_operator(A * B)));
  }
  out.push_back(bounded("star.operator_product", op_err, cfg.tolerance("star")));

  const WeylSymbol unit = symbol_of_operator(CircleOperator::identity(fp, N));
  const WeylSymbol G = symbol_of_operator(random_hermitian(fp, N, rng));
  out.push_back(bounded("star.unit", std::max(star_trikernel(unit, G, N).max_abs_diff(G),
                                              star_trikernel(G, unit, N).max_abs_diff(G)),
                        cfg.tolerance("star")));

  double tri_err = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const int Bf = 1 + trial % 3, Bg = 2;
    const double p_scale = std::abs(fp.lattice_momentum(2 * N)) + fp.hbar;
    const CylinderFunction f = random_trig_poly(fp, Bf, 2 * N + Bg + 2, p_scale, rng);
    const CylinderFunction g = random_trig_poly(fp, Bg, 2 * N + Bf + 2, p_scale, rng);
    const WeylSymbol via_operator = symbol_of_operator(weyl_quantize(f, N) * weyl_quantize(g, N));
    const WeylSymbol via_trikernel =
        star_trikernel(symbol_of_function(f).restricted_to_band(N), symbol_of_function(g).restricted_to_band(N), N);
    const WeylSymbol via_mode = symbol_of_function(star_mode(f, g));
    // star_mode carries no band truncation, so it is compared where both products see every term.
    const int window = 2 * N - Bf - Bg;
    double mode_err = 0.0;
    for (int n = -window; n <= window; ++n) {
      for (int r = -2 * N; r <= 2 * N; ++r) {
        mode_err = std::max({mode_err, std::abs(via_mode.coeff(r, n) - via_trikernel.coeff(r, n)),
                             std::abs(via_mode.coeff(r, n) - via_operator.coeff(r, n))});
      }
    }
    tri_err = std::max({tri_err, via_operator.max_abs_diff(via_trikernel), mode_err});
  }
  out.push_back(bounded("star.triangle", tri_err, cfg.tolerance("star"), "operator, trikernel, mode"));

  double bracket_err = 0.0;
  for (double hbar : {1.0, 0.5, 0.25}) {
    const FiberParams unit_circle(kTwoPi, 0.0, hbar);
    const CylinderFunction c = CylinderFunction::sample(unit_circle, 1, 12, [](int m, double) {
      return m == 0 ? cplx{} : cplx{0.5, 0.0};
    });
    const CylinderFunction p = CylinderFunction::sample(unit_circle, 0, 12, [](int, double mom) { return cplx{mom, 0.0}; });
    const CylinderFunction br = moyal_bracket(c, p);
    for (int n = -br.p_range(); n <= br.p_range(); ++n) {
      bracket_err = std::max({bracket_err, std::abs(br.coeff(1, n) - cplx(0.0, 0.5)),
                              std::abs(br.coeff(-1, n) - cplx(0.0, -0.5)), std::abs(br.coeff(0, n))});
    }
  }
  out.push_back(bounded("star.moyal_bracket_cos_p", bracket_err, 0.0, "-sin(theta), exact for hbar=1,0.5,0.25"));
}

void bridge_suite(const RunConfig& cfg, Checks& out) {
  const int N = cfg.N;
  const FiberParams unit_circle(kTwoPi, 0.0, 1.0);
  const ThetaGrid grid16(16);
  double matrix_err = 0.0, trace_err = 0.0;
  for (int j = 0; j < 16; ++j) {
    for (int n = -4; n <= 4; ++n) {
      const PpttQuantizerIndex idx{grid16.node(j), n};
      const CircleOperator op = pptt_quantizer_matrix(idx, N);
      matrix_err = std::max(matrix_err, max_abs(op.matrix() - quantizer_matrix(idx.to_circle(), unit_circle, N).matrix()));
      trace_err = std::max(trace_err, std::abs(op.trace() - 1.0));
    }
  }
  out.push_back(bounded("bridge.pptt_matrix", matrix_err, cfg.tolerance("pptt_matrix"), "16x9 (theta,n) grid"));
  out.push_back(bounded("bridge.pptt_trace", trace_err, cfg.tolerance("trace")));

  auto rng = suite_rng(404);
  const ThetaGrid grid(4 * N + 2);
  double route = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PpttFunction f(grid, N, 1.0);
    for (int j = 0; j < grid.size(); ++j) {
      for (int n = -N; n <= N; ++n) f.at(j, n) = random_complex(rng);
    }
    route = std::max(route, bridge_equivalence(f, N).max_difference());
  }
  out.push_back(bounded("bridge.three_routes", route, cfg.tolerance("bridge"), "20 random functions"));

  double fold = 0.0;
  for (double x : {0.0, 0.25, 1.0, -1.5}) {
    for (int n = -8; n <= 8; ++n) fold = std::max(fold, fold_property_residual(x, n, N));
  }
  out.push_back(bounded("bridge.fold_property", fold, 0.0, "exact"));
}

void coherent_suite(const RunConfig& cfg, Checks& out) {
  const FiberParams fp = fiber_of(cfg);
  const CircleGrid grid(fp.a, cfg.M);
  double route = 0.0;
  for (int iq = 0; iq < 5; ++iq) {
    for (int ip = 0; ip < 5; ++ip) {
      for (double omega : {0.25, 1.0, 4.0}) {
        const CoherentStateParams csp(iq * fp.a / 5.0, (ip - 2) * fp.hbar, omega, fp);
        route = std::max(route, max_abs(cs_wavefunction_theta(csp, grid) - cs_wavefunction_sum(csp, grid)));
      }
    }
  }
  out.push_back(bounded("coherent.theta_vs_sum", route, cfg.tolerance("coherent_routes"), "5x5x3 (q,p,omega) grid"));

  const int N = cfg.N;
  const double reach = std::abs(fp.basis_momentum(N)) + std::abs(fp.basis_momentum(-N));
  const double cutoff = cfg.p_cutoff > 0.0 ? cfg.p_cutoff : 0.5 * reach + 12.0 * std::sqrt(cfg.omega * fp.hbar);
  const double spacing = std::sqrt(cfg.omega * fp.hbar) / 4.0;
  const int p_steps = static_cast<int>(std::ceil(2.0 * cutoff / spacing));
  const ResolutionReport res = resolution_of_unity(fp, cfg.omega, N, cutoff, 2 * N + 2, p_steps);
  out.push_back(bounded("coherent.resolution_of_unity", res.deviation, cfg.tolerance("resolution")));

  const std::string f_spec = cfg.function.empty() ? "cos(q)" : cfg.function;
  const StateSpec st = parse_state(cfg.state);
  const CoherentStateParams state(st.q, st.p, st.omega, fp);
  const auto rows = semiclassical_sweep(parse_expression(f_spec).to_mode_function(),
                                        parse_expression(cfg.pair).to_mode_function(), state, {1.0, 0.5, 0.2, 0.1});
  const std::pair<const char*, double SweepRow::*> columns[] = {{"bracket", &SweepRow::bracket_error},
                                                                 {"f", &SweepRow::f_error},
                                                                 {"momentum", &SweepRow::momentum_error},
                                                                 {"norm", &SweepRow::norm_error},
                                                                 {"shift", &SweepRow::shift_error}};
  for (const auto& [label, member] : columns) {
    int violations = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (!(rows[i].*member < rows[i - 1].*member)) ++violations;
    }
    char detail[64];
    std::snprintf(detail, sizeof detail, "last error %.3e at hbar=0.1", rows.back().*member);
    out.push_back(bounded(std::string("coherent.sweep_monotone.") + label, violations, 0.0, detail));
  }
}

using Suite = void (*)(const RunConfig&, Checks&);

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> table = {{"bridge", bridge_suite},
                                                                    {"coherent", coherent_suite},
                                                                    {"star", star_suite},
                                                                    {"traces", traces_suite},
                                                                    {"trikernel", trikernel_suite}};
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suites()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

std::uint64_t run_seed() {
  if (const char* env = std::getenv("CYLQ_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 20240611ULL;
}

std::vector<CheckResult> run_verification(const RunConfig& cfg) {
  Checks results;
  bool matched = false;
  for (const auto& [name, fn] : suites()) {
    if (cfg.suite != "all" && cfg.suite != name) continue;
    matched = true;
    try {
      fn(cfg, results);
    } catch (const std::exception& e) {
      results.push_back({name + ".error", CheckStatus::fail, 0.0, 0.0, e.what()});
    }
  }
  if (!matched) throw UnknownSuite("unknown suite '" + cfg.suite + "'");
  std::stable_sort(results.begin(), results.end(),
                   [](const CheckResult& l, const CheckResult& r) { return l.name < r.name; });
  return results;
}

std::string format_check(const CheckResult& r) {
  const char* status = r.status == CheckStatus::pass ? "PASS" : r.status == CheckStatus::fail ? "FAIL" : "SKIP";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s  %-44s measured=%-11.3e bound=%-9.2e %s", status, r.name.c_str(), r.measured,
                r.bound, r.detail.c_str());
  std::string line = buf;
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(), [](const CheckResult& r) { return r.status == CheckStatus::fail; });
}

}  // namespace cylq
