#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <boost/crc.hpp>
#include <json.hpp>

#include "dmps/applications.hpp"
#include "dmps/error.hpp"
#include "dmps/montecarlo.hpp"
#include "dmps/stationary.hpp"
#include "dmps/verifier.hpp"

namespace dmps::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Options that never reach a manifest: they select where and how results are
// written, not what is computed.
const std::vector<std::string> kExecutionOptions = {"help", "config", "out", "workers", "format"};

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& table) {
  std::string text;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) text += ',';
    text += table.columns[i];
  }
  text += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += format_number(row[i]);
    }
    text += '\n';
  }
  return text;
}

Json to_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json record = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) record[table.columns[i]] = row[i];
    rows.push_back(std::move(record));
  }
  return rows;
}

struct GridSpec {
  double lo;
  double hi;
  int n;

  std::vector<double> points() const { return linspace(lo, hi, static_cast<std::size_t>(n)); }
};

GridSpec parse_grid(const std::string& text, const char* flag) {
  GridSpec grid{};
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(text);
  if (!(in >> grid.lo >> sep1 >> grid.hi >> sep2 >> grid.n) || sep1 != ':' || sep2 != ':' ||
      grid.n < 1 || (grid.n > 1 && !(grid.hi > grid.lo))) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(flag) + " expects lo:hi:n with lo < hi and n >= 1");
  }
  return grid;
}

std::uint32_t crc32_of(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", v);
  return buf;
}

// Collects the files a command writes and the manifest that accompanies them.
class Sink {
 public:
  Sink(std::string out_path, std::ostream& out) : out_path_(std::move(out_path)), out_(out) {}

  bool to_file() const { return !out_path_.empty(); }
  const std::string& path() const { return out_path_; }

  // Writes to `path` (or stdout when no --out was given and path is primary).
  void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << text;
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
    written_.push_back({fs::path(path).filename().string(), crc32_of(text)});
  }

  void write_manifest(const std::string& command, const Json& parameters,
                      std::optional<std::uint64_t> seed) {
    if (written_.empty()) return;
    Json manifest = Json::object();
    manifest["command"] = command;
    manifest["tool_version"] = kToolVersion;
    manifest["schema_version"] = kSchemaVersion;
    manifest["parameters"] = parameters;
    manifest["seed"] = seed ? Json(*seed) : Json(nullptr);
    Json outputs = Json::array();
    for (const auto& [name, crc] : written_) {
      outputs.push_back(Json{{"file", name}, {"crc32", hex32(crc)}});
    }
    manifest["outputs"] = outputs;
    const std::string path = out_path_ + ".manifest.json";
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << manifest.dump(2) << '\n';
  }

 private:
  std::string out_path_;
  std::ostream& out_;
  std::vector<std::pair<std::string, std::uint32_t>> written_;
};

Json collect_parameters(const CLI::App& sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (std::find(kExecutionOptions.begin(), kExecutionOptions.end(), name) !=
        kExecutionOptions.end()) {
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (i) value += ',';
        value += results[i];
      }
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
      // Vector defaults are rendered as "[a,b,c]".
      if (value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    }
    params[name] = value;
  }
  return params;
}

// Adds "--key value" for every entry of a flat key-value JSON document (or the
// "parameters" object of a manifest) that the command line does not already
// set.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> expanded;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      expanded.push_back(args[i]);
    }
  }
  if (config_path.empty()) return expanded;

  std::ifstream file(config_path);
  if (!file) throw Error(ErrorKind::InvalidParameter, "cannot read config '" + config_path + "'");
  Json doc;
  try {
    doc = Json::parse(file);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidParameter, "config is not valid JSON: " + std::string(e.what()));
  }
  const Json& params = doc.contains("parameters") ? doc.at("parameters") : doc;
  if (!params.is_object()) {
    throw Error(ErrorKind::InvalidParameter, "config must be a flat key-value object");
  }
  auto on_command_line = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(expanded.begin(), expanded.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  for (const auto& [key, value] : params.items()) {
    if (on_command_line(key)) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ',';
        text += value[i].is_string() ? value[i].get<std::string>() : value[i].dump();
      }
    } else if (value.is_primitive() && !value.is_null()) {
      text = value.dump();
    } else {
      throw Error(ErrorKind::InvalidParameter, "config value for '" + key + "' is not flat");
    }
    expanded.push_back("--" + key);
    expanded.push_back(text);
  }
  return expanded;
}

MarginalForm parse_form(const std::string& name) {
  if (name == "cosh") return MarginalForm::CoshProduct;
  if (name == "branch-sum") return MarginalForm::BranchSum;
  throw Error(ErrorKind::InvalidParameter, "unknown form '" + name + "' (cosh|branch-sum)");
}

const char* form_name(MarginalForm form) {
  return form == MarginalForm::CoshProduct ? "cosh" : "branch-sum";
}

void emit_table(Sink& sink, const Table& table, const std::string& format) {
  sink.emit(sink.path(), format == "json" ? to_json(table).dump(2) + "\n" : to_csv(table));
}

void emit_json(Sink& sink, const Json& doc) { sink.emit(sink.path(), doc.dump(2) + "\n"); }

Json report_json(const DmpsReport& r) {
  return Json{{"lambda", r.lambda},
              {"t", r.t},
              {"first_condition_residual", r.first_condition_residual},
              {"mean_difference", r.mean_difference},
              {"second_condition_min", r.second_condition_min},
              {"phi_left_end", r.phi_left_end},
              {"phi_right_end", r.phi_right_end},
              {"psi_antisymmetry_residual", r.psi_antisymmetry_residual},
              {"curvature_min", r.curvature_min},
              {"r_symmetry_residual", r.r_symmetry_residual},
              {"r_min", r.r_min}};
}

Json tolerances_json(const DmpsTolerances& t) {
  return Json{{"first_condition", t.first_condition},   {"phi_floor", t.phi_floor},
              {"phi_ends", t.phi_ends},                 {"r_symmetry", t.r_symmetry},
              {"r_floor", t.r_floor},                   {"psi_antisymmetry", t.psi_antisymmetry},
              {"curvature_floor", t.curvature_floor}};
}

Json stats_json(const std::vector<double>& values) {
  const SampleStats s = sample_stats(values);
  return Json{{"n", values.size()},
              {"mean", s.mean},
              {"variance", s.variance},
              {"mean_standard_error", s.mean_standard_error}};
}

std::string samples_csv(const std::vector<double>& values) {
  std::string text = "value\n";
  for (double v : values) {
    text += format_number(v);
    text += '\n';
  }
  return text;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic mean-preserving spreads: closed forms, verification and simulation",
               "dmps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_path;
  std::string format = "csv";
  unsigned workers = 0;
  auto add_common = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--out", out_path, "Output file (stdout when omitted)");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_str(default_format);
    sub->add_option("--config", "Flat JSON key-value file (or a run manifest) supplying flags");
  };

  // figure1 ---------------------------------------------------------------
  std::vector<double> fig_lambdas;
  std::vector<double> fig_t;
  std::string t_grid;
  std::string x_grid = "-8:8:161";
  auto* figure1 = app.add_subcommand("figure1", "CDF surfaces P(x, t) of the ballistic law");
  figure1->add_option("--lambda", fig_lambdas, "Risk levels")->delimiter(',')->default_str("1,2,5,10");
  figure1->add_option("--t", fig_t, "Explicit times (overrides --t-grid)")->delimiter(',');
  figure1->add_option("--t-grid", t_grid, "Time grid lo:hi:n")->default_str("0.1:2:40");
  figure1->add_option("--x-grid", x_grid, "Space grid lo:hi:n")->capture_default_str();
  add_common(figure1, "csv");

  // figure2 ---------------------------------------------------------------
  double x0 = 1.0;
  double mu = 10.0;
  double sigma = 1.0;
  std::string convention = "paper";
  auto* figure2 = app.add_subcommand("figure2", "Mean asset path under ballistic driving noise");
  figure2->add_option("--lambda", fig_lambdas, "Risk levels")->delimiter(',')->default_str("0,1,2,5,10");
  figure2->add_option("--t", fig_t, "Explicit times (overrides --t-grid)")->delimiter(',');
  figure2->add_option("--t-grid", t_grid, "Time grid lo:hi:n")->default_str("0:1:101");
  figure2->add_option("--x0", x0)->capture_default_str();
  figure2->add_option("--mu", mu)->capture_default_str();
  figure2->add_option("--sigma", sigma)->capture_default_str();
  figure2->add_option("--convention", convention)
      ->check(CLI::IsMember({"paper", "half-variance"}))
      ->capture_default_str();
  add_common(figure2, "csv");

  // verify ----------------------------------------------------------------
  double lambda = 0.0;
  double t = 1.0;
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  int n_x = 2048;
  std::optional<double> lambda_step;
  double quad_tol = 1e-10;
  auto* verify = app.add_subcommand("verify", "Check the DMPS integral conditions numerically");
  verify->add_option("--lambda", lambda, "Risk level (> 0)")->required();
  verify->add_option("--t", t, "Time (> 0)")->required();
  verify->add_option("--x-lo", x_lo, "Lower grid end (default: auto)");
  verify->add_option("--x-hi", x_hi, "Upper grid end (default: auto)");
  verify->add_option("--nx", n_x, "Grid intervals")->capture_default_str();
  verify->add_option("--lambda-step", lambda_step, "Central-difference step in lambda");
  verify->add_option("--quad-tol", quad_tol, "Absolute tolerance per panel")->capture_default_str();
  add_common(verify, "json");

  // simulate --------------------------------------------------------------
  std::string process = "ballistic";
  long paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 42;
  std::string scheme = "exact";
  double slope = -1.0;
  std::string form = "branch-sum";
  int bins = 50;
  double hist_lo = -5.0;
  double hist_hi = 5.0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo samples with summary statistics");
  simulate->add_option("--process", process)
      ->check(CLI::IsMember({"ballistic", "coupled", "bs"}))
      ->capture_default_str();
  simulate->add_option("--lambda", lambda)->capture_default_str();
  simulate->add_option("--t", t, "Horizon")->capture_default_str();
  simulate->add_option("--paths", paths)->capture_default_str();
  simulate->add_option("--dt", dt)->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--scheme", scheme, "Ballistic sampler")
      ->check(CLI::IsMember({"exact", "euler"}))
      ->capture_default_str();
  simulate->add_option("--slope", slope, "Coupled system drift b(x) = slope * x")->capture_default_str();
  simulate->add_option("--sigma", sigma)->capture_default_str();
  simulate->add_option("--form", form, "Coupling of the Bernoulli drift")
      ->check(CLI::IsMember({"branch-sum", "cosh"}))
      ->capture_default_str();
  simulate->add_option("--bins", bins)->capture_default_str();
  simulate->add_option("--hist-lo", hist_lo)->capture_default_str();
  simulate->add_option("--hist-hi", hist_hi)->capture_default_str();
  simulate->add_option("--x0", x0)->capture_default_str();
  simulate->add_option("--mu", mu)->capture_default_str();
  simulate->add_option("--workers", workers, "Worker threads (0 = all cores)");
  add_common(simulate, "json");

  // invest ----------------------------------------------------------------
  InvestParams invest_params;
  std::optional<double> invest_h;
  auto* invest = app.add_subcommand("invest", "Marginal value of installed capital");
  invest->set_help_flag("--help", "Print this help message and exit");
  invest->add_option("--r", invest_params.r)->capture_default_str();
  invest->add_option("--delta", invest_params.delta)->capture_default_str();
  invest->add_option("--alpha", invest_params.alpha)->capture_default_str();
  invest->add_option("--omega", invest_params.omega)->capture_default_str();
  invest->add_option("--theta", invest_params.theta)->capture_default_str();
  invest->add_option("--sigma", invest_params.sigma)->capture_default_str();
  invest->add_option("--mu", invest_params.mu, "Ballistic amplitude")->capture_default_str();
  invest->add_option("--p", invest_params.p_t, "Current productivity p_t")->capture_default_str();
  invest->add_option("--h", invest_h, "Profit scale (required when omega = 0)");
  add_common(invest, "json");

  // price -----------------------------------------------------------------
  std::optional<double> price_x;
  auto* price = app.add_subcommand("price", "Black-Scholes asset under ballistic driving noise");
  price->add_option("--lambda", lambda)->capture_default_str();
  price->add_option("--t", t)->capture_default_str();
  price->add_option("--x0", x0)->capture_default_str();
  price->add_option("--mu", mu)->capture_default_str();
  price->add_option("--sigma", sigma)->capture_default_str();
  price->add_option("--convention", convention)
      ->check(CLI::IsMember({"paper", "half-variance"}))
      ->capture_default_str();
  price->add_option("--x", price_x, "Also evaluate the marginal density at x");
  add_common(price, "json");

  // cep -------------------------------------------------------------------
  double cep_b = 1.0;
  auto* cep = app.add_subcommand("cep", "Certainty-equivalence classification");
  cep->add_option("--b", cep_b, "Constant drift")->capture_default_str();
  cep->add_option("--lambda", lambda)->capture_default_str();
  add_common(cep, "json");

  // stationary ------------------------------------------------------------
  int grid_n = 2001;
  auto* stationary = app.add_subcommand("stationary", "Stationary marginal of b(x) = slope * x");
  stationary->add_option("--slope", slope)->capture_default_str();
  stationary->add_option("--sigma", sigma)->capture_default_str();
  stationary->add_option("--lambda", lambda)->capture_default_str();
  stationary->add_option("--form", form)
      ->check(CLI::IsMember({"branch-sum", "cosh"}))
      ->default_str("cosh");
  stationary->add_option("--grid-n", grid_n)->capture_default_str();
  add_common(stationary, "json");

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  // Subcommand-specific defaults that differ between commands.
  const std::string first = args.empty() ? "" : args.front();
  if (first == "stationary") form = "cosh";
  if (first == "figure1" || first == "figure2") format = "csv";
  if (first == "verify" || first == "simulate" || first == "invest" || first == "price" ||
      first == "cep" || first == "stationary") {
    format = "json";
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Sink sink(out_path, out);

  try {
    if (command == "figure1" || command == "figure2") {
      if (fig_lambdas.empty()) {
        fig_lambdas = command == "figure1" ? std::vector<double>{1, 2, 5, 10}
                                           : std::vector<double>{0, 1, 2, 5, 10};
      }
      if (t_grid.empty()) t_grid = command == "figure1" ? "0.1:2:40" : "0:1:101";
      const std::vector<double> times = fig_t.empty() ? parse_grid(t_grid, "--t-grid").points() : fig_t;
      Table table;
      if (command == "figure1") {
        const auto xs = parse_grid(x_grid, "--x-grid").points();
        table.columns = {"lambda", "t", "x", "P"};
        for (double l : fig_lambdas) {
          const RiskParam risk(l);
          for (double tt : times) {
            detail::require(tt > 0.0, "figure1: every t must be > 0");
            for (double x : xs) table.rows.push_back({l, tt, x, cdf_P(risk, tt, x)});
          }
        }
      } else {
        BSParams bs;
        bs.x0 = x0;
        bs.mu = mu;
        bs.sigma = sigma;
        bs.convention = parse_convention(convention);
        table.columns = {"lambda", "t", "mean"};
        for (double l : fig_lambdas) {
          bs.lambda = RiskParam(l);
          for (double tt : times) table.rows.push_back({l, tt, bs_mean(tt, bs)});
        }
      }
      emit_table(sink, table, format);
      sink.write_manifest(command, collect_parameters(*sub), std::nullopt);
      return kSuccess;
    }

    if (command == "verify") {
      const RiskParam risk(lambda);
      detail::require(lambda > 0.0, "verify: lambda must be > 0 (central lambda difference)");
      detail::require(t > 0.0, "verify: t must be > 0");
      VerifyGrid grid = VerifyGrid::for_ballistic(risk, t);
      if (x_lo) grid.x_lo = *x_lo;
      if (x_hi) grid.x_hi = *x_hi;
      if (lambda_step) grid.lambda_step = *lambda_step;
      grid.n_x = n_x;
      grid.quad_tol = quad_tol;
      const DmpsReport report = verify_ballistic(risk, t, grid);
      const DmpsTolerances tol;
      const bool pass = report.passes(tol);
      Json doc = report_json(report);
      doc["grid"] = Json{{"x_lo", grid.x_lo},
                         {"x_hi", grid.x_hi},
                         {"n_x", grid.n_x},
                         {"lambda_step", grid.lambda_step},
                         {"quad_tol", grid.quad_tol}};
      doc["tolerances"] = tolerances_json(tol);
      doc["pass"] = pass;
      emit_json(sink, doc);
      sink.write_manifest(command, collect_parameters(*sub), std::nullopt);
      return pass ? kSuccess : kVerificationFailed;
    }

    if (command == "simulate") {
      const RiskParam risk(lambda);
      Json stats = Json::object();
      stats["process"] = process;
      std::vector<double> values;
      if (process == "ballistic") {
        if (scheme == "exact") {
          values = exact_ballistic_sample(risk, t, paths, seed, workers).values;
        } else {
          SimConfig cfg{dt, t, paths, seed, Scheme::EulerMaruyama};
          const RealFn drift = [risk](double x) { return ballistic_drift(x, risk); };
          values = euler_maruyama(brownian(1.0), drift, 0.0, cfg, workers).values;
        }
        stats["scheme"] = scheme;
        stats["summary"] = stats_json(values);
        stats["expected_mean"] = 0.0;
        stats["expected_variance"] = t + 2.0 * lambda * t * t;
        stats["ks"] = ks_distance(values, [risk, t](double x) { return cdf_P(risk, t, x); });
        stats["ks_critical_99"] = 1.63 / std::sqrt(static_cast<double>(values.size()));
      } else if (process == "coupled") {
        const DiffusionSpec spec = linear_drift(slope, sigma);
        const MarginalForm coupling = parse_form(form);
        SimConfig cfg{dt, t, paths, seed, Scheme::EulerMaruyama};
        values = simulate_coupled_samples(spec, risk, cfg, coupling, workers).values;
        const Histogram hist = make_histogram(values, HistogramSpec{hist_lo, hist_hi, bins});
        const StationaryDensity marginal = stationary_ballistic_marginal(spec, risk, coupling);
        stats["form"] = form_name(coupling);
        stats["summary"] = stats_json(values);
        stats["modes"] = histogram_mode_count(hist);
        stats["predicted_modes"] = mode_count(marginal, 4001);
        stats["l1"] = l1_distance(hist, marginal);
        stats["curvature_origin"] = curvature_origin(spec, risk, coupling);
      } else {
        BSParams bs;
        bs.x0 = x0;
        bs.mu = mu;
        bs.sigma = sigma;
        bs.lambda = risk;
        bs.validate();
        values = exact_ballistic_sample(risk, t, paths, seed, workers).values;
        for (double& v : values) v = x0 * std::exp(mu * t + sigma * v);
        const SampleStats s = sample_stats(values);
        bs.convention = MomentConvention::HalfVariance;
        const double half = bs_mean(t, bs);
        bs.convention = MomentConvention::Paper;
        stats["summary"] = stats_json(values);
        stats["mean_half_variance"] = half;
        stats["mean_paper"] = bs_mean(t, bs);
        stats["z_half_variance"] = (s.mean - half) / s.mean_standard_error;
        const double centre = std::log(x0) + mu * t;
        const double spread = sigma * risk.rate() * t;
        const double scale = sigma * std::sqrt(t);
        stats["ks"] = ks_distance(values, [=](double x) {
          if (x <= 0.0) return 0.0;
          const double y = std::log(x);
          return 0.5 * normal_cdf((y - centre + spread) / scale) +
                 0.5 * normal_cdf((y - centre - spread) / scale);
        });
      }
      if (sink.to_file()) {
        sink.emit(out_path, samples_csv(values));
        sink.emit(out_path + ".stats.json", stats.dump(2) + "\n");
      } else {
        out << stats.dump(2) << '\n';
      }
      sink.write_manifest(command, collect_parameters(*sub), seed);
      return kSuccess;
    }

    if (command == "invest") {
      invest_params.h = invest_h;
      invest_params.validate();
      Json doc = Json::object();
      doc["inputs"] = Json{{"r", invest_params.r},         {"delta", invest_params.delta},
                           {"alpha", invest_params.alpha}, {"omega", invest_params.omega},
                           {"theta", invest_params.theta}, {"sigma", invest_params.sigma},
                           {"mu", invest_params.mu},       {"p", invest_params.p_t}};
      doc["h"] = invest_params.profit_scale();
      doc["effective_discount"] = invest_params.effective_discount();
      doc["q0"] = q0(invest_params);
      doc["q_mu_plus"] = q_mu(invest_params, +1);
      doc["q_mu_minus"] = q_mu(invest_params, -1);
      doc["q_ballistic"] = q_ballistic(invest_params);
      doc["q_ballistic_smallmu"] = q_ballistic_smallmu(invest_params);
      emit_json(sink, doc);
      sink.write_manifest(command, collect_parameters(*sub), std::nullopt);
      return kSuccess;
    }

    if (command == "price") {
      BSParams bs;
      bs.x0 = x0;
      bs.mu = mu;
      bs.sigma = sigma;
      bs.lambda = RiskParam(lambda);
      bs.convention = parse_convention(convention);
      BSParams classic = bs;
      classic.lambda = RiskParam(0.0);
      Json doc = Json::object();
      doc["inputs"] = Json{{"lambda", lambda}, {"t", t},         {"x0", x0},
                           {"mu", mu},         {"sigma", sigma}, {"convention", convention}};
      doc["mean"] = bs_mean(t, bs);
      doc["mean_lambda0"] = bs_mean(t, classic);
      doc["growth_ratio"] = growth_ratio(t, sigma, bs.lambda);
      doc["median_minus_branch"] = bs_branch_median(t, bs, -1);
      doc["median_plus_branch"] = bs_branch_median(t, bs, +1);
      doc["bankruptcy_drift"] = mu - sigma * bs.lambda.rate() < 0.0;
      if (price_x) doc["density"] = bs_marginal_density(*price_x, t, bs);
      emit_json(sink, doc);
      sink.write_manifest(command, collect_parameters(*sub), std::nullopt);
      return kSuccess;
    }

    if (command == "cep") {
      const CepVerdict verdict = cep_classify(cep_b, RiskParam(lambda));
      emit_json(sink, Json{{"b", cep_b},
                           {"lambda", lambda},
                           {"holds", verdict.holds},
                           {"margin", verdict.margin}});
      sink.write_manifest(command, collect_parameters(*sub), std::nullopt);
      return kSuccess;
    }

    if (command == "stationary") {
      const DiffusionSpec spec = linear_drift(slope, sigma);
      const RiskParam risk(lambda);
      const MarginalForm marginal_form = parse_form(form);
      const StationaryDensity density = stationary_ballistic_marginal(spec, risk, marginal_form);
      if (format == "csv") {
        Table table;
        table.columns = {"x", "density"};
        for (double x : linspace(density.lo, density.hi, static_cast<std::size_t>(grid_n))) {
          table.rows.push_back({x, density(x)});
        }
        emit_table(sink, table, format);
      } else {
        emit_json(sink, Json{{"slope", slope},
                             {"sigma", sigma},
                             {"lambda", lambda},
                             {"form", form_name(marginal_form)},
                             {"curvature_origin", curvature_origin(spec, risk, marginal_form)},
                             {"curvature_wgn", curvature_origin(spec, RiskParam(0.0), marginal_form)},
                             {"modes", mode_count(density, grid_n)},
                             {"argmax_abs", std::fabs(argmax(density, grid_n))},
                             {"support", Json::array({density.lo, density.hi})},
                             {"normalization", density.normalization}});
      }
      sink.write_manifest(command, collect_parameters(*sub), std::nullopt);
      return kSuccess;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::DivergentIntegral:
      case ErrorKind::NotNormalizable:
      case ErrorKind::NumericalBlowup:
        return kDivergentModel;
      default:
        return kUsage;
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace dmps::cli
