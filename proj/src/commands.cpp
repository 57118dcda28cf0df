#include "cylq/commands.hpp"

#include "cylq/coherent.hpp"
#include "cylq/expression.hpp"
#include "cylq/serialize.hpp"
#include "cylq/verify.hpp"

namespace cylq {

namespace {

const std::vector<double> kDefaultHbars = {1.0, 0.5, 0.2, 0.1};

int emit(const RunConfig& cfg, const std::string& content, std::ostream& out, std::ostream& err) {
  if (cfg.out.empty()) {
    out << content;
    return kExitOk;
  }
  try {
    write_atomic(cfg.out, content);
  } catch (const std::exception& e) {
    err << "cylq: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

bool parse_or_report(const std::string& label, const std::string& text, TrigPolynomial& result, std::ostream& err) {
  try {
    result = parse_expression(text);
    return true;
  } catch (const ParseError& e) {
    err << "cylq: cannot parse " << label << " '" << text << "': " << e.what() << "\n";
    return false;
  }
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  auto pair = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  for (const SweepRow& r : rows) {
    arr.push_back({{"hbar", r.hbar},
                   {"band", r.band},
                   {"norm", r.norm},
                   {"f", pair(r.f)},
                   {"shift", pair(r.shift)},
                   {"momentum", pair(r.momentum)},
                   {"bracket", pair(r.bracket)},
                   {"norm_error", r.norm_error},
                   {"f_error", r.f_error},
                   {"shift_error", r.shift_error},
                   {"momentum_error", r.momentum_error},
                   {"bracket_error", r.bracket_error}});
  }
  return dump(arr);
}

}  // namespace

int cmd_quantize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.function.empty()) {
    err << "cylq: quantize needs --function\n";
    return kExitUsage;
  }
  if (cfg.format == "csv") {
    err << "cylq: quantize writes json only\n";
    return kExitUsage;
  }
  TrigPolynomial f;
  if (!parse_or_report("function", cfg.function, f, err)) return kExitUsage;
  if (f.band() > 2 * cfg.N) {
    err << "cylq: function band " << f.band() << " exceeds 2N = " << 2 * cfg.N << "\n";
    return kExitBand;
  }
  const FiberParams fp(cfg.a, cfg.k, cfg.hbar);
  const CircleOperator op = weyl_quantize(CylinderFunction::sample(fp, 2 * cfg.N, f.to_mode_function()), cfg.N);
  return emit(cfg, dump(to_json(op)), out, err);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_verification(cfg);
  } catch (const UnknownSuite& e) {
    err << "cylq: " << e.what() << "; choose one of";
    for (const auto& name : suite_names()) err << ' ' << name;
    err << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "cylq: " << e.what() << "\n";
    return kExitUsage;
  }
  std::string report;
  int passed = 0, failed = 0, skipped = 0;
  for (const CheckResult& r : results) {
    report += format_check(r) + "\n";
    (r.status == CheckStatus::pass ? passed : r.status == CheckStatus::fail ? failed : skipped) += 1;
  }
  report += std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " + std::to_string(skipped) +
            " skipped\n";
  const int written = emit(cfg, report, out, err);
  if (written != kExitOk) return written;
  return all_passed(results) ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  TrigPolynomial f, g;
  if (!parse_or_report("function", cfg.function.empty() ? "cos(q)" : cfg.function, f, err)) return kExitUsage;
  if (!parse_or_report("pair", cfg.pair, g, err)) return kExitUsage;
  StateSpec st;
  try {
    st = parse_state(cfg.state);
  } catch (const ConfigError& e) {
    err << "cylq: " << e.what() << "\n";
    return kExitUsage;
  }
  const FiberParams fp(cfg.a, cfg.k, cfg.hbar);
  const CoherentStateParams state(st.q, st.p, st.omega, fp);
  const std::vector<double> hbars = cfg.hbar_set ? std::vector<double>{cfg.hbar} : kDefaultHbars;
  const auto rows = semiclassical_sweep(f.to_mode_function(), g.to_mode_function(), state, hbars);
  return emit(cfg, cfg.format == "json" ? sweep_json(rows) : sweep_csv(rows), out, err);
}

}  // namespace cylq
