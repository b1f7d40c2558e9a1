// cltlab: sweeps and verification suites for entropic CLT convergence.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clt/analysis.hpp"
#include "clt/density.hpp"
#include "clt/distributions.hpp"
#include "clt/edgeworth.hpp"
#include "clt/entropy.hpp"
#include "clt/errors.hpp"
#include "clt/io.hpp"
#include "clt/kernels.hpp"

using namespace clt;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumerical = 3 };

// Raw option values as given on the command line. Empty means "not given".
struct Flags {
  std::string source;
  std::string ns;
  std::vector<double> alphas;
  std::optional<double> half_width;
  std::optional<std::size_t> points;
  std::optional<double> gamma;
  std::string out;
  std::string config;
  std::vector<std::string> suites;
  std::vector<double> gammas;
  std::string kernels;
  unsigned threads = 0;
};

struct RunConfig {
  SourceSpec source = SourceSpec::centered_exponential();
  std::vector<std::uint64_t> ns;
  std::vector<double> alphas;
  std::optional<double> half_width;
  std::optional<std::size_t> points;
  double gamma = kDefaultGamma;
  std::string out = "cltlab-out";
  std::vector<std::string> suites;
  std::vector<double> gammas;
  unsigned threads = 0;
};

std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a positive integer: '" + s + "'");
  }
  if (used != s.size() || v == 0 || s.front() == '-')
    throw UsageError("not a positive integer: '" + s + "'");
  return v;
}

// "a:b" is the powers of two from a to b; anything else is a comma list.
std::vector<std::uint64_t> parse_ns(const std::string& text) {
  std::vector<std::uint64_t> ns;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    ns = powers_of_two(parse_count(text.substr(0, colon)), parse_count(text.substr(colon + 1)));
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) ns.push_back(parse_count(item));
  }
  require_increasing(ns);
  return ns;
}

std::vector<std::uint64_t> ns_from_json(const json& j) {
  if (j.is_string()) return parse_ns(j.get<std::string>());
  if (j.is_number_unsigned()) return parse_ns(std::to_string(j.get<std::uint64_t>()));
  if (!j.is_array()) throw UsageError("config \"ns\" must be a string or an array");
  std::vector<std::uint64_t> ns;
  for (const auto& e : j) {
    if (!e.is_number_unsigned()) throw UsageError("config \"ns\" entries must be positive integers");
    ns.push_back(e.get<std::uint64_t>());
  }
  require_increasing(ns);
  return ns;
}

template <class T>
T json_get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config \"") + key + "\" has the wrong type");
  }
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + " is not valid JSON: " + e.what());
  }
}

void apply_config_file(RunConfig& c, const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::vector<std::string> known{"source", "ns", "alphas", "L", "m", "gamma",
                                              "out", "suite", "gammas", "threads"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw UsageError("unknown config key \"" + key + "\"");
  }
  if (j.contains("source")) {
    const auto& s = j["source"];
    c.source = s.is_string() ? default_source(parse_source_kind(s.get<std::string>()))
                             : source_from_json(s);
  }
  if (j.contains("ns")) c.ns = ns_from_json(j["ns"]);
  if (j.contains("alphas")) c.alphas = json_get<std::vector<double>>(j, "alphas");
  if (j.contains("L")) c.half_width = json_get<double>(j, "L");
  if (j.contains("m")) c.points = json_get<std::size_t>(j, "m");
  if (j.contains("gamma")) c.gamma = json_get<double>(j, "gamma");
  if (j.contains("out")) c.out = json_get<std::string>(j, "out");
  if (j.contains("suite")) {
    const auto& s = j["suite"];
    c.suites = s.is_string() ? std::vector<std::string>{s.get<std::string>()}
                             : json_get<std::vector<std::string>>(j, "suite");
  }
  if (j.contains("gammas")) c.gammas = json_get<std::vector<double>>(j, "gammas");
  if (j.contains("threads")) c.threads = json_get<unsigned>(j, "threads");
}

bool given(const CLI::App& sub, const char* name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

RunConfig resolve(const Flags& f, const CLI::App& sub) {
  RunConfig c;
  if (!f.config.empty()) apply_config_file(c, load_json(f.config));
  if (given(sub, "--source")) c.source = default_source(parse_source_kind(f.source));
  if (given(sub, "--ns") || given(sub, "--n")) c.ns = parse_ns(f.ns);
  if (given(sub, "--alphas")) c.alphas = f.alphas;
  if (given(sub, "--L")) c.half_width = f.half_width;
  if (given(sub, "--m")) c.points = f.points;
  if (given(sub, "--gamma")) c.gamma = *f.gamma;
  if (given(sub, "--out")) c.out = f.out;
  if (given(sub, "--suite")) c.suites = f.suites;
  if (given(sub, "--gammas")) c.gammas = f.gammas;
  if (given(sub, "--threads")) c.threads = f.threads;
  if (!f.kernels.empty()) kernels::select(kernels::parse_isa(f.kernels));

  for (double a : c.alphas) require_supported_order(EntropyOrder(a));
  // Grid overrides are checked up front so a bad m is a usage error before any work.
  if (c.half_width || c.points)
    (void)build_grid(c.half_width.value_or(16.0), c.points.value_or(kDefaultPoints));
  if (c.out.empty()) throw UsageError("output directory must be nonempty");
  return c;
}

Grid grid_for(const RunConfig& c, double alpha_min) {
  const Grid base = default_grid(std::min(alpha_min, 1.0));
  return build_grid(c.half_width.value_or(base.half_width), c.points.value_or(base.points));
}

SeriesOptions series_options(const RunConfig& c, double alpha_min) {
  SeriesOptions o;
  if (c.half_width || c.points) o.grid = grid_for(c, alpha_min);
  o.workers = c.threads;
  return o;
}

double min_alpha(const std::vector<double>& alphas) {
  return alphas.empty() ? 1.0 : *std::min_element(alphas.begin(), alphas.end());
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string n_tag(std::uint64_t n) { return n == kGaussianLimit ? "inf" : std::to_string(n); }

// Files are collected during a command and written together at the end.
struct Outputs {
  std::filesystem::path dir;
  std::vector<std::pair<std::string, std::string>> files;

  void add(std::string name, std::string text) { files.emplace_back(std::move(name), std::move(text)); }

  void flush() const {
    for (const auto& [name, text] : files) {
      write_text(dir / name, text);
      std::cout << (dir / name).string() << "\n";
    }
  }
};

void defaults(RunConfig& c, const char* ns, std::vector<double> alphas) {
  if (c.ns.empty()) c.ns = parse_ns(ns);
  if (c.alphas.empty()) c.alphas = std::move(alphas);
}

int cmd_density(RunConfig c) {
  defaults(c, "1", {1.0});
  const Grid grid = grid_for(c, 1.0);
  const auto dens = densities_for(c.source, c.ns, grid, {}, c.threads);
  Outputs out{c.out, {}};
  const std::string stem = "density_" + std::string(c.source.name()) + "_n";
  for (const auto& d : dens) {
    out.add(stem + n_tag(d.n) + ".csv", density_csv(d));
    out.add(stem + n_tag(d.n) + ".json", dump_json(density_metadata(d, c.source)));
  }
  out.flush();
  return kOk;
}

int cmd_entropy(RunConfig c) {
  defaults(c, "1:64", {0.5, 2.0});
  const Grid grid = grid_for(c, min_alpha(c.alphas));
  const auto dens = densities_for(c.source, c.ns, grid, {}, c.threads);
  Outputs out{c.out, {}};
  for (const auto& d : dens) {
    std::vector<EntropyValue> values{shannon(d)};
    for (double a : c.alphas) {
      if (a == 1.0) continue;
      values.push_back(renyi(d, EntropyOrder(a)));
      values.push_back(tsallis(d, EntropyOrder(a)));
    }
    out.add("entropy_" + std::string(c.source.name()) + "_n" + n_tag(d.n) + ".csv",
            entropy_csv(values));
  }
  out.flush();
  return kOk;
}

int cmd_rates(RunConfig c) {
  defaults(c, "16:1024", {0.5, 2.0});
  if (c.ns.size() < 3) throw UsageError("rates needs at least 3 values of n");
  std::vector<SeriesRequest> requests;
  for (double a : c.alphas) {
    const EntropyOrder order(a);
    (void)theoretical_exponent(order, c.gamma);
    if (order.is_shannon()) {
      requests.push_back({order, EntropyKind::shannon});
    } else {
      requests.push_back({order, EntropyKind::renyi});
      requests.push_back({order, EntropyKind::tsallis});
    }
  }
  const auto series =
      error_series_batch(c.source, requests, c.ns, series_options(c, min_alpha(c.alphas)));
  const std::size_t skip = std::min<std::size_t>(kDefaultSkipFirst, c.ns.size() - 3);

  Outputs out{c.out, {}};
  json summary;
  summary["source"] = source_to_json(c.source);
  summary["gamma"] = c.gamma;
  summary["skip_first"] = skip;
  json rows = json::array();
  bool all_pass = true;
  for (const auto& s : series) {
    const std::string kind(entropy_kind_name(s.kind));
    out.add("rates_" + std::string(c.source.name()) + "_" + kind + "_alpha" +
                tag(s.order.alpha()) + ".csv",
            rate_csv(s));
    json row;
    row["alpha"] = s.order.alpha();
    row["kind"] = kind;
    try {
      const RateFit fit = fit_loglog(s, skip, c.gamma);
      const bool pass = rate_bound_holds(fit);
      row["slope"] = fit.slope;
      row["intercept"] = fit.intercept;
      row["r_squared"] = fit.r_squared;
      row["theoretical_exponent"] = fit.theoretical_exponent;
      row["used_points"] = fit.used_points;
      row["pass"] = pass;
      all_pass = all_pass && pass;
      std::cout << kind << " alpha=" << tag(s.order.alpha()) << " slope=" << format_double(fit.slope)
                << " bound=" << format_double(fit.theoretical_exponent)
                << (pass ? " pass" : " FAIL") << "\n";
    } catch (const FitError& e) {
      // Errors already at roundoff level: nothing to fit and nothing violated.
      row["note"] = "below tolerance floor";
      row["detail"] = e.what();
      row["pass"] = true;
      std::cout << kind << " alpha=" << tag(s.order.alpha()) << " below tolerance floor\n";
    }
    rows.push_back(row);
  }
  summary["series"] = rows;
  summary["pass"] = all_pass;
  out.add("rates_" + std::string(c.source.name()) + "_summary.json", dump_json(summary));
  out.flush();
  return kOk;
}

int cmd_edgeworth(RunConfig c) {
  defaults(c, "1:1024", {});
  const auto points = edgeworth_residual_series(c.source, c.ns, series_options(c, 1.0));
  const double mu3 = moments(c.source, 3).mu3;
  Outputs out{c.out, {}};
  json summary;
  summary["source"] = source_to_json(c.source);
  summary["mu3"] = mu3;
  summary["profile_max"] = first_order_profile_max(mu3);
  json rows = json::array();
  for (const auto& p : points)
    rows.push_back({{"n", p.n}, {"sup_residual", p.sup_residual}, {"scaled_residual", p.scaled_residual}});
  summary["points"] = rows;
  out.add("edgeworth_" + std::string(c.source.name()) + ".csv", edgeworth_csv(points));
  out.add("edgeworth_" + std::string(c.source.name()) + "_summary.json", dump_json(summary));
  out.flush();
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct Report {
  json items = json::array();
  bool pass = true;

  void record(const std::string& suite, const std::string& item, double value, double tolerance,
              bool ok) {
    items.push_back({{"suite", suite}, {"item", item}, {"value", value}, {"tolerance", tolerance},
                     {"pass", ok}});
    note(suite, item, ok, "value " + format_double(value) + ", tolerance " + tag(tolerance));
  }

  void failure(const std::string& suite, const std::string& item, const NumericalError& e) {
    items.push_back({{"suite", suite}, {"item", item}, {"pass", false}, {"check", e.check()},
                     {"detail", e.detail()}});
    note(suite, item, false, std::string("check '") + e.check() + "' failed: " + e.detail());
  }

  // Runs one item; numerical failures are recorded against it instead of aborting the suite.
  template <class Fn>
  void run(const std::string& suite, const std::string& item, Fn fn) {
    try {
      fn();
    } catch (const NumericalError& e) {
      failure(suite, item, e);
    }
  }

 private:
  void note(const std::string& suite, const std::string& item, bool ok, const std::string& what) {
    pass = pass && ok;
    (ok ? std::cout : std::cerr) << (ok ? "ok     " : "FAILED ") << suite << " " << item << ": "
                                 << what << "\n";
  }
};

void require_mass(const GridDensity& d, const InversionOptions& opt = {}) {
  const double mass = validate_density(d).mass;
  if (!(std::fabs(mass - 1.0) <= opt.mass_tolerance))
    throw NumericalError("mass", "total " + format_double(mass) + " deviates from 1 (n=" +
                                     n_tag(d.n) + ")");
}

void suite_lemma6(const RunConfig& c, Report& r) {
  const std::vector<double> gammas =
      c.gammas.empty() ? std::vector<double>{0.05, 0.15, 0.25, 0.35, 0.45} : c.gammas;
  for (double g : gammas) {
    const auto cert = verify_lemma6(g, 2000);
    r.record("lemma6", "gamma=" + tag(g), cert.max_violation, -1e-12, cert.holds());
  }
}

void suite_gaussian_closed_forms(const RunConfig& c, Report& r) {
  const std::vector<double> alphas = c.alphas.empty() ? std::vector<double>{0.5, 2.0, 4.0} : c.alphas;
  const GridDensity g = gaussian_density(grid_for(c, min_alpha(alphas)));
  r.run("gaussian-closed-forms", "grid", [&] { require_mass(g); });
  const double tol = 1e-10;
  const double h = std::fabs(shannon(g).value - gaussian_shannon_entropy());
  r.record("gaussian-closed-forms", "shannon", h, tol, h < tol);
  for (double a : alphas) {
    if (a == 1.0) continue;
    const EntropyOrder order(a);
    for (EntropyKind kind : {EntropyKind::renyi, EntropyKind::tsallis}) {
      const double d = std::fabs(entropy_of(g, kind, order).value - gaussian_closed(kind, order).value);
      r.record("gaussian-closed-forms", std::string(entropy_kind_name(kind)) + " alpha=" + tag(a), d,
               tol, d < tol);
    }
  }
}

void suite_fixed_point(const RunConfig& c, Report& r) {
  const std::vector<std::uint64_t> ns = c.ns.empty() ? powers_of_two(1, 1024) : c.ns;
  const Grid grid = grid_for(c, 1.0);
  const GridDensity g = gaussian_density(grid);
  for (std::uint64_t n : ns) {
    r.run("fixed-point", "n=" + std::to_string(n), [&] {
      const GridDensity d = density_for(SourceSpec::gaussian(), n, grid);
      require_mass(d);
      const double sup = sup_distance(d, g);
      r.record("fixed-point", "n=" + std::to_string(n), sup, 1e-10, sup < 1e-10);
    });
  }
}

void suite_path_agreement(const RunConfig& c, Report& r) {
  const Grid grid = grid_for(c, 1.0);
  for (const auto& spec : {SourceSpec::uniform(), SourceSpec::centered_exponential(),
                           SourceSpec::laplace(), SourceSpec::default_mixture()}) {
    const std::string item(spec.name());
    r.run("path-agreement", item, [&] {
      const auto chain = self_convolution_chain(spec, 6, grid);
      double worst = 0.0;
      for (int k : {1, 4, 6}) {
        const GridDensity d = density_cf_inversion(spec, std::uint64_t{1} << k, grid);
        require_mass(chain[k - 1]);
        worst = std::max(worst, sup_distance(d, chain[k - 1]));
      }
      r.record("path-agreement", item, worst, 1e-6, worst < 1e-6);
    });
  }
}

void suite_bijection(const RunConfig& c, Report& r) {
  const std::vector<double> alphas =
      c.alphas.empty() ? std::vector<double>{0.5, 2.0, 4.0} : c.alphas;
  const Grid grid = grid_for(c, min_alpha(alphas));
  for (const auto& spec : {SourceSpec::uniform(), SourceSpec::centered_exponential(),
                           SourceSpec::laplace(), SourceSpec::default_mixture()}) {
    for (std::uint64_t n : {2, 16}) {
      const std::string item = std::string(spec.name()) + " n=" + std::to_string(n);
      r.run("bijection", item, [&] {
        const GridDensity d = density_for(spec, n, grid);
        require_mass(d);
        double worst = 0.0;
        for (double a : alphas) {
          if (a == 1.0) continue;
          const EntropyOrder order(a);
          const double back = renyi_from_tsallis(tsallis(d, order), order).value;
          worst = std::max(worst, std::fabs(back - renyi(d, order).value));
        }
        r.record("bijection", item, worst, 1e-12, worst < 1e-12);
      });
    }
  }
}

int cmd_verify(RunConfig c) {
  using Suite = void (*)(const RunConfig&, Report&);
  const std::vector<std::pair<std::string, Suite>> all{
      {"lemma6", suite_lemma6},
      {"gaussian-closed-forms", suite_gaussian_closed_forms},
      {"fixed-point", suite_fixed_point},
      {"path-agreement", suite_path_agreement},
      {"bijection", suite_bijection}};
  if (c.suites.empty()) c.suites = {"all"};
  std::vector<std::pair<std::string, Suite>> chosen;
  for (const auto& name : c.suites) {
    if (name == "all") {
      chosen = all;
      break;
    }
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.first == name; });
    if (it == all.end()) throw UsageError("unknown suite '" + name + "'");
    chosen.push_back(*it);
  }

  Report report;
  for (const auto& [name, suite] : chosen) suite(c, report);

  json doc;
  json names = json::array();
  for (const auto& s : chosen) names.push_back(s.first);
  doc["suites"] = names;
  doc["pass"] = report.pass;
  doc["items"] = report.items;
  Outputs out{c.out, {}};
  out.add("verify_report.json", dump_json(doc));
  out.flush();
  return report.pass ? kOk : kVerifyFailed;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--source", f.source, "gaussian, uniform, exp, laplace or gaussian_mixture");
  sub->add_option("--ns", f.ns, "powers of two a:b, or a comma list");
  sub->add_option("--n", f.ns, "same as --ns");
  sub->add_option("--alphas", f.alphas, "entropy orders in [0.1, 16]")->delimiter(',');
  sub->add_option("--L", f.half_width, "grid half-width");
  sub->add_option("--m", f.points, "grid points (power of two)");
  sub->add_option("--gamma", f.gamma, "rate parameter for alpha <= 1");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--config", f.config, "JSON config; flags take precedence");
  sub->add_option("--kernels", f.kernels, "scalar, avx2 or auto");
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic central limit theorem sweeps and verification"};
  app.require_subcommand(1);
  Flags f;
  struct Command {
    CLI::App* app;
    int (*run)(RunConfig);
  };
  std::vector<Command> commands{
      {app.add_subcommand("density", "density CSV and metadata per n"), cmd_density},
      {app.add_subcommand("entropy", "Shannon, Renyi and Tsallis entropies per n"), cmd_entropy},
      {app.add_subcommand("rates", "convergence rates with log-log fits"), cmd_rates},
      {app.add_subcommand("edgeworth", "first-order Edgeworth residuals"), cmd_edgeworth},
      {app.add_subcommand("verify", "invariant and certificate suites"), cmd_verify}};
  for (auto& cmd : commands) add_common(cmd.app, f);
  auto* verify = commands.back().app;
  verify->add_option("--suite", f.suites, "lemma6, gaussian-closed-forms, fixed-point, path-agreement, bijection or all")
      ->delimiter(',');
  verify->add_option("--gammas", f.gammas, "gammas for the lemma6 suite")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (auto& cmd : commands)
      if (cmd.app->parsed()) return cmd.run(resolve(f, *cmd.app));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
