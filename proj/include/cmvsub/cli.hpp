#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmvsub/error.hpp"
#include "cmvsub/gordon.hpp"
#include "cmvsub/io.hpp"
#include "cmvsub/rotation.hpp"
#include "cmvsub/spectrum.hpp"
#include "cmvsub/tracemap.hpp"
#include "cmvsub/words.hpp"

namespace cmvsub::cli {

// Exit-code contract.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kResource = 4 };

namespace detail {

inline Complex parse_complex(const std::string& text) {
  auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    std::string re_s = text.substr(0, comma), im_s = text.substr(comma + 1);
    double re = std::stod(re_s, &used);
    if (used != re_s.size()) throw std::invalid_argument(text);
    double im = std::stod(im_s, &used);
    if (used != im_s.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse complex number '" + text + "' (expected re or re,im)");
  }
}

// "p/q" is exact, "theta" is the rotation number, anything else a decimal.
inline Real parse_real(const std::string& text, const std::optional<RotationNumber>& theta = std::nullopt) {
  if (text == "theta") {
    if (!theta) throw InvalidArgument("'theta' used without --theta");
    return theta->value();
  }
  if (text == "1-theta") {
    if (!theta) throw InvalidArgument("'1-theta' used without --theta");
    return Real(1) - theta->value();
  }
  try {
    std::size_t used = 0;
    if (auto slash = text.find('/'); slash != std::string::npos) {
      std::string num = text.substr(0, slash), den = text.substr(slash + 1);
      long long p = std::stoll(num, &used);
      if (used != num.size()) throw std::invalid_argument(text);
      long long q = std::stoll(den, &used);
      if (used != den.size() || q == 0) throw std::invalid_argument(text);
      return Real(QuadraticNumber::rational(p, q));
    }
    long double v = std::stold(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    if (v == std::floor(v) && std::fabs(v) < 1e15L) return Real(static_cast<std::int64_t>(v));
    return Real::approximate(v);
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse real number '" + text + "'");
  }
}

inline std::pair<long, long> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw InvalidArgument("range must look like first..last");
  try {
    long lo = std::stol(text.substr(0, dots));
    long hi = std::stol(text.substr(dots + 2));
    if (hi < lo) throw InvalidArgument("empty range " + text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse range '" + text + "'");
  }
}

inline CircleInterval parse_interval(const std::string& text, const std::optional<RotationNumber>& theta) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument("interval must look like lo,hi");
  return {parse_real(text.substr(0, comma), theta), parse_real(text.substr(comma + 1), theta)};
}

// Appends "--key value" tokens from a JSON config for every key not already
// present on the command line. Explicit flags win.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw InvalidArgument("cannot open config file " + *path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw InvalidArgument("config must be a JSON object");
  auto present = [&](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  auto scalar = [](const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return io::fmt(v[0].get<double>()) + "," + io::fmt(v[1].get<double>());
    return v.dump();
  };
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    std::string flag = "--" + key;
    if (present(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array() && !(value.size() == 2 && value[0].is_number() && value[1].is_number())) {
      args.push_back(flag);
      for (const auto& v : value) args.push_back(scalar(v));
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  if (cfg.contains("command") && (args.empty() || args[0].rfind("--", 0) == 0))
    args.insert(args.begin(), cfg["command"].get<std::string>());
  return args;
}

class Output {
 public:
  Output(std::ostream& fallback, const std::string& path) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidArgument("cannot open output file " + path);
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ostream* out_;
  std::unique_ptr<std::ofstream> file_;
};

struct CoefficientOptions {
  std::string rule;
  int level = -1;
  std::string f_a = "0.3";
  std::string f_b = "-0.3";
  std::vector<std::string> alphas;
  bool free = false;
  long period = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rule", rule, "substitution rule (period-doubling, fibonacci, thue-morse)");
    cmd->add_option("--level", level, "substitution level n (period 2^n for period doubling)");
    cmd->add_option("--f-a", f_a, "f(a) as re or re,im");
    cmd->add_option("--f-b", f_b, "f(b) as re or re,im");
    cmd->add_option("--alphas", alphas, "one period of coefficients, each re or re,im");
    cmd->add_flag("--free", free, "alpha identically zero (needs --period)");
    cmd->add_option("--period", period, "period for --free");
  }

  VerblunskyMap map() const { return VerblunskyMap(parse_complex(f_a), parse_complex(f_b)); }

  PeriodicCoefficients coefficients() const {
    if (free) {
      if (period < 1) throw InvalidArgument("--free needs --period");
      return PeriodicCoefficients(std::vector<Complex>(static_cast<std::size_t>(period), Complex(0)));
    }
    if (!alphas.empty()) {
      std::vector<Complex> a;
      for (const auto& s : alphas) a.push_back(parse_complex(s));
      return PeriodicCoefficients(std::move(a));
    }
    if (rule.empty() || level < 0) throw InvalidArgument("give --rule/--level, --alphas, or --free --period");
    return periodic_approximant(level, SubstitutionRule::by_name(rule), map());
  }

  bool is_period_doubling() const { return alphas.empty() && !free && rule == "period-doubling"; }
};

}  // namespace detail

/// Runs one CLI invocation. args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  try {
    args = detail::merge_config(std::move(args));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"CMV operators generated by subshifts: words, continued fractions, spectra, trace maps, Gordon sets"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config; explicit flags override its keys");
  app.add_option("--threads", threads, "worker threads for grid scans")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", seed, "seed for any sampling");

  // word
  auto* word_cmd = app.add_subcommand("word", "substitution fixed-point prefix or coding window");
  std::string word_rule, word_theta = "golden", word_beta = "0", word_range = "1..8", word_interval, word_out;
  int word_level = -1;
  bool word_sturmian = false;
  word_cmd->add_option("--rule", word_rule, "substitution rule");
  word_cmd->add_option("--level", word_level, "number of substitution steps");
  word_cmd->add_flag("--sturmian", word_sturmian, "Sturmian coding, I = [1 - theta, 1)");
  word_cmd->add_option("--interval", word_interval, "coding interval lo,hi (rotation coding)");
  word_cmd->add_option("--theta", word_theta, "rotation number");
  word_cmd->add_option("--beta", word_beta, "phase");
  word_cmd->add_option("--range", word_range, "index window first..last");
  word_cmd->add_option("--out", word_out, "output file");

  // cf
  auto* cf_cmd = app.add_subcommand("cf", "continued fraction and convergents");
  std::string cf_theta = "golden", cf_out;
  int cf_depth = 10;
  cf_cmd->add_option("--theta", cf_theta, "rotation number");
  cf_cmd->add_option("--depth", cf_depth, "number of partial quotients");
  cf_cmd->add_option("--out", cf_out, "output file");

  // spectrum
  auto* sp_cmd = app.add_subcommand("spectrum", "discriminant samples and band arcs of a periodic operator");
  detail::CoefficientOptions sp_coef;
  sp_coef.attach(sp_cmd);
  std::size_t sp_resolution = std::size_t{1} << 14, sp_max_resolution = std::size_t{1} << 22;
  double sp_edge_tol = 1e-10, sp_reality_tol = kRealityTolerance;
  std::string sp_json, sp_csv;
  sp_cmd->add_option("--resolution", sp_resolution, "initial number of angles");
  sp_cmd->add_option("--max-resolution", sp_max_resolution, "cap for adaptive doubling");
  sp_cmd->add_option("--edge-tol", sp_edge_tol, "band edge tolerance in angle");
  sp_cmd->add_option("--reality-tol", sp_reality_tol, "tolerance on scaled |Im Delta|");
  sp_cmd->add_option("--json", sp_json, "arcs JSON output (default stdout)");
  sp_cmd->add_option("--csv", sp_csv, "discriminant curve CSV output");

  // trace
  auto* tr_cmd = app.add_subcommand("trace", "period doubling trace-map orbit");
  std::string tr_fa = "0.5", tr_fb = "-0.5", tr_z = "1", tr_csv, tr_json;
  int tr_levels = 10, tr_cap = 60;
  double tr_tol = kTraceBoundTolerance;
  tr_cmd->add_option("--f-a", tr_fa, "f(a) as re or re,im");
  tr_cmd->add_option("--f-b", tr_fb, "f(b) as re or re,im");
  tr_cmd->add_option("--z", tr_z, "spectral parameter on the unit circle, re or re,im");
  tr_cmd->add_option("--levels", tr_levels, "number of levels");
  tr_cmd->add_option("--cap", tr_cap, "iteration cap for the stability verdict");
  tr_cmd->add_option("--tol", tr_tol, "tolerance of the trace bound");
  tr_cmd->add_option("--csv", tr_csv, "orbit CSV output (default stdout)");
  tr_cmd->add_option("--json", tr_json, "verdict JSON output");

  // gordon
  auto* go_cmd = app.add_subcommand("gordon", "Gordon phase sets and measure bounds");
  std::string go_theta = "golden", go_mode = "sturmian", go_interval, go_sweep, go_json, go_csv;
  int go_n = 9;
  go_cmd->add_option("--theta", go_theta, "rotation number");
  go_cmd->add_option("--mode", go_mode, "sturmian or coding")->check(CLI::IsMember({"sturmian", "coding"}));
  go_cmd->add_option("--interval", go_interval, "coding interval lo,hi");
  go_cmd->add_option("--n", go_n, "continued fraction index");
  go_cmd->add_option("--sweep", go_sweep, "range of n for a CSV summary, first..last");
  go_cmd->add_option("--json", go_json, "report JSON output (default stdout)");
  go_cmd->add_option("--csv", go_csv, "summary CSV output for --sweep (default stdout)");

  // floquet-check
  auto* fl_cmd = app.add_subcommand("floquet-check", "eigenvalues of E_q(phi) against the discriminant");
  detail::CoefficientOptions fl_coef;
  fl_coef.attach(fl_cmd);
  int fl_phis = 16;
  double fl_tol = 1e-8, fl_unitary_tol = 1e-12;
  std::string fl_out;
  fl_cmd->add_option("--phis", fl_phis, "number of skew angles");
  fl_cmd->add_option("--tol", fl_tol, "tolerance on |Delta(z0) - (phi + 1/phi)|");
  fl_cmd->add_option("--unitary-tol", fl_unitary_tol, "tolerance on ||E E* - I||");
  fl_cmd->add_option("--out", fl_out, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*word_cmd) {
      detail::Output o(out, word_out);
      if (!word_rule.empty()) {
        if (word_level < 0) throw InvalidArgument("--rule needs --level");
        o.stream() << fixed_point_prefix(SubstitutionRule::by_name(word_rule), word_level).str() << '\n';
      } else {
        if (!word_sturmian && word_interval.empty()) throw InvalidArgument("give --rule, --sturmian or --interval");
        RotationNumber theta = RotationNumber::parse(word_theta);
        Real beta = detail::parse_real(word_beta, theta);
        CodingParams params = word_sturmian
                                  ? CodingParams::sturmian(theta, beta)
                                  : CodingParams(theta, beta, detail::parse_interval(word_interval, theta));
        auto [lo, hi] = detail::parse_range(word_range);
        std::string s;
        for (long n = lo; n <= hi; ++n) s.push_back(to_char(coding_letter(params, n)));
        o.stream() << s << '\n';
      }
    } else if (*cf_cmd) {
      detail::Output o(out, cf_out);
      RotationNumber theta = RotationNumber::parse(cf_theta);
      ContinuedFraction cf = continued_fraction(theta, cf_depth);
      nlohmann::json j = io::to_json(cf);
      j["schema"] = io::kSchema;
      j["theta"] = theta.label().empty() ? theta.value().to_string() : theta.label();
      j["even_q_indices"] = even_q_indices(cf);
      o.stream() << j.dump() << '\n';
    } else if (*sp_cmd) {
      ScanOptions opt;
      opt.initial_resolution = sp_resolution;
      opt.max_resolution = std::max(sp_max_resolution, sp_resolution);
      opt.edge_tolerance = sp_edge_tol;
      opt.reality_tolerance = sp_reality_tol;
      opt.threads = threads;
      SpectrumScan scan;
      const bool want_samples = !sp_csv.empty();
      if (sp_coef.is_period_doubling()) {
        if (sp_coef.level < 2) throw InvalidArgument("periodic approximant level must be >= 2");
        PeriodDoublingDiscriminant eval{sp_coef.level, sp_coef.map()};
        scan = spectrum_arcs(eval, eval.period(), opt, want_samples);
      } else {
        PeriodicCoefficients coeffs = sp_coef.coefficients();
        coeffs.require_even_period();
        scan = spectrum_arcs(PeriodicDiscriminant{coeffs}, coeffs.period(), opt, want_samples);
      }
      detail::Output o(out, sp_json);
      o.stream() << io::to_json(scan).dump() << '\n';
      if (want_samples) {
        detail::Output c(out, sp_csv);
        io::write_discriminant_csv(c.stream(), scan.samples);
      }
    } else if (*tr_cmd) {
      VerblunskyMap f(detail::parse_complex(tr_fa), detail::parse_complex(tr_fb));
      Complex z = detail::parse_complex(tr_z);
      if (std::abs(std::abs(z) - 1.0) > 1e-9) throw InvalidArgument("--z must lie on the unit circle");
      TraceOrbit orbit = trace_orbit(UnitPoint<double>(std::arg(z)), f, tr_levels);
      StabilityVerdict verdict = classify(orbit.x_at(1), orbit.y_at(1), orbit.B, tr_cap);
      detail::Output c(out, tr_csv);
      io::write_orbit_csv(c.stream(), orbit);
      if (!tr_json.empty()) {
        detail::Output j(out, tr_json);
        nlohmann::json v = io::to_json(verdict, orbit.B);
        v["trace_bound_violation"] = nullptr;
        if (auto bad = trace_bound_violation(orbit, tr_tol)) v["trace_bound_violation"] = *bad;
        j.stream() << v.dump() << '\n';
      }
    } else if (*go_cmd) {
      RotationNumber theta = RotationNumber::parse(go_theta);
      PhaseSetMode mode = go_mode == "sturmian" ? PhaseSetMode::sturmian()
                                                : PhaseSetMode::coding(detail::parse_interval(
                                                      go_interval.empty() ? throw InvalidArgument("--mode coding needs --interval")
                                                                          : go_interval,
                                                      theta));
      if (!go_sweep.empty()) {
        auto [lo, hi] = detail::parse_range(go_sweep);
        detail::Output c(out, go_csv);
        io::write_gordon_summary_csv_header(c.stream());
        for (long n = std::max(1L, lo); n <= hi; ++n)
          io::write_gordon_summary_csv_row(c.stream(), gordon_set(theta, mode, static_cast<int>(n)));
      } else {
        GordonReport rep = gordon_set(theta, mode, go_n);
        if (!rep.applicable) err << "warning: q_n = " << rep.q_n << " is odd; the set does not feed the Gordon lemma\n";
        detail::Output o(out, go_json);
        o.stream() << io::to_json(rep).dump() << '\n';
      }
    } else if (*fl_cmd) {
      PeriodicCoefficients coeffs = fl_coef.coefficients();
      if (fl_phis < 1) throw InvalidArgument("--phis must be >= 1");
      nlohmann::json results = nlohmann::json::array();
      double worst_mismatch = 0, worst_unitary = 0;
      for (int k = 0; k < fl_phis; ++k) {
        double angle = kTwoPi * (k + 0.5) / fl_phis;
        FloquetCheck c = floquet_cross_check(coeffs, std::polar(1.0, angle));
        worst_mismatch = std::max(worst_mismatch, c.max_discriminant_mismatch);
        worst_unitary = std::max(worst_unitary, c.unitarity_residual);
        results.push_back({{"phi_angle", angle},
                           {"max_mismatch", c.max_discriminant_mismatch},
                           {"unitarity_residual", c.unitarity_residual}});
      }
      bool pass = worst_mismatch < fl_tol && worst_unitary < fl_unitary_tol;
      detail::Output o(out, fl_out);
      o.stream() << nlohmann::json{{"schema", io::kSchema},
                                   {"q", coeffs.period()},
                                   {"phis", results},
                                   {"max_mismatch", worst_mismatch},
                                   {"max_unitarity_residual", worst_unitary},
                                   {"pass", pass}}
                        .dump()
                 << '\n';
      if (!pass) return kNumeric;
    }
  } catch (const NumericAssertion& e) {
    err << "numeric assertion failed: " << e.what() << '\n';
    return kNumeric;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace cmvsub::cli
