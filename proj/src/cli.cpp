#include "fockbench/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fockbench/errors.hpp"
#include "fockbench/experiment.hpp"
#include "fockbench/measures.hpp"
#include "fockbench/state_io.hpp"
#include "fockbench/tomography.hpp"

namespace fockbench {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// SOURCE_DATE_EPOCH pins the timestamp so that manifests are reproducible.
std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& output, const std::string& command, json params,
                    std::optional<std::uint64_t> seed) {
  json doc;
  doc["command"] = command;
  doc["params"] = std::move(params);
  doc["seed"] = seed ? json(*seed) : json(nullptr);
  doc["versions"] = {{"manifest", kManifestFormatVersion},
                     {"state", kStateFormatVersion},
                     {"tool", kToolVersion}};
  doc["timestamp"] = iso_timestamp();
  std::ofstream out(output.string() + ".manifest.json", std::ios::binary);
  if (!out) throw InvalidArgument("cannot write manifest next to " + output.string());
  out << doc.dump(2) << '\n';
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  return out;
}

json params_json(const ExperimentParams& p) {
  return {{"alpha", p.alpha.real()}, {"r", p.r},     {"gamma", p.gamma},
          {"xi", p.xi},              {"eta", p.eta}, {"dim", p.signal_dim()},
          {"aux_dim", p.auxiliary_dim()}};
}

struct SweepOptions {
  std::string figure;
  std::string alpha = "0.5";
  std::string r = "0.15";
  std::string gamma = "0";
  std::string xi = "1";
  std::string eta = "1";
  int dim = 0;
};

std::vector<ExperimentParams> sweep_points(const SweepOptions& o) {
  std::vector<ExperimentParams> points;
  auto add = [&](double alpha, double r, double gamma, double xi, double eta) {
    ExperimentParams p;
    p.alpha = alpha;
    p.r = r;
    p.gamma = gamma;
    p.xi = xi;
    p.eta = eta;
    p.dim = o.dim;
    points.push_back(p);
  };
  if (o.figure == "fig2") {
    for (double r : {1e-4, 0.15, 0.30, 0.45}) {
      for (int i = 0; i <= 30; ++i) add(0.05 * i, r, 0.0, 1.0, 1.0);
    }
  } else if (o.figure == "fig4") {
    for (int knob = 0; knob < 3; ++knob) {
      for (int i = 0; i <= 40; ++i) {
        const double v = 0.025 * i;
        add(0.5, 0.15, knob == 0 ? v : 0.0, knob == 1 ? v : 1.0, knob == 2 ? v : 1.0);
      }
    }
  } else if (o.figure == "fig5") {
    for (int i = 0; i <= 20; ++i) add(0.5 + 0.05 * i, 0.105, 0.425, 0.96, 0.71);
  } else if (o.figure.empty()) {
    for (double a : parse_value_list(o.alpha))
      for (double r : parse_value_list(o.r))
        for (double g : parse_value_list(o.gamma))
          for (double x : parse_value_list(o.xi))
            for (double e : parse_value_list(o.eta)) add(a, r, g, x, e);
  } else {
    throw InvalidArgument("--figure must be fig2, fig4 or fig5");
  }
  return points;
}

WignerGridSpec grid_from_flags(const DensityMatrix& rho, std::optional<double> lo,
                               std::optional<double> hi, std::optional<double> step) {
  if (!lo && !hi) {
    return covering_grid(rho, step.value_or(0.05));
  }
  if (!lo || !hi) throw InvalidArgument("--grid-min and --grid-max go together");
  return {*lo, *hi, *lo, *hi, step.value_or(0.05)};
}

TomoConfig tomo_config(int dim, std::optional<double> lo, std::optional<double> hi,
                       std::optional<double> step, int max_iters) {
  TomoConfig c;
  c.dim = dim;
  c.x_min = lo.value_or(c.x_min);
  c.x_max = hi.value_or(c.x_max);
  const double s = step.value_or(0.03);
  if (!(s > 0.0)) throw InvalidArgument("--grid-step must be positive");
  c.n_points = static_cast<int>(std::lround((c.x_max - c.x_min) / s));
  c.max_iters = max_iters;
  c.validate();
  return c;
}

}  // namespace

std::vector<double> parse_value_list(const std::string& spec) {
  auto to_double = [&spec](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InvalidArgument("malformed grid spec '" + spec + "'");
    }
  };
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidArgument("malformed grid spec '" + spec + "' (start:stop:step)");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw InvalidArgument("malformed grid spec '" + spec + "'");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) values.push_back(start + static_cast<double>(i) * step);
    return values;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) values.push_back(to_double(p));
  if (values.empty()) throw InvalidArgument("empty grid spec");
  return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-added coherent state simulator: non-Gaussianity, non-classicality, homodyne tomography"};
  app.require_subcommand(1);

  // simulate
  ExperimentParams sim;
  double sim_alpha = 0.0;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run the noisy photon-addition model and save the state");
  simulate->add_option("--alpha", sim_alpha, "Coherent amplitude (real)");
  simulate->add_option("--r", sim.r, "Squeezing parameter")->check(CLI::NonNegativeNumber);
  simulate->add_option("--gamma", sim.gamma, "Parasitic gain ratio")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--xi", sim.xi, "Trigger purity")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--eta", sim.eta, "Homodyne efficiency")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--dim", sim.dim, "Signal cutoff (default by |alpha|)");
  simulate->add_option("--out", sim_out, "Output state file")->required();

  // sweep
  SweepOptions sw;
  std::string sweep_out;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Evaluate delta and nu over a parameter grid");
  sweep->add_option("--figure", sw.figure, "Preset grid: fig2, fig4 or fig5");
  sweep->add_option("--alpha", sw.alpha, "Values: list a,b,c or range start:stop:step");
  sweep->add_option("--r", sw.r, "Values for r");
  sweep->add_option("--gamma", sw.gamma, "Values for gamma");
  sweep->add_option("--xi", sw.xi, "Values for xi");
  sweep->add_option("--eta", sw.eta, "Values for eta");
  sweep->add_option("--dim", sw.dim, "Signal cutoff (default by |alpha|)");
  sweep->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "Output CSV")->required();

  // measure
  std::string state_path;
  std::string which;
  std::optional<double> grid_min, grid_max, grid_step;
  std::string measure_out;
  auto* measure = app.add_subcommand("measure", "Compute delta, nu or a Wigner grid for a state file");
  measure->add_option("--state", state_path, "State file")->required();
  measure->add_option("--which", which, "delta, nu or wigner-grid")
      ->required()
      ->check(CLI::IsMember({"delta", "nu", "wigner-grid"}));
  measure->add_option("--grid-min", grid_min, "Lower phase-space bound (both axes)");
  measure->add_option("--grid-max", grid_max, "Upper phase-space bound (both axes)");
  measure->add_option("--grid-step", grid_step, "Grid step");
  measure->add_option("--out", measure_out, "CSV output for wigner-grid");

  // tomo
  auto* tomo = app.add_subcommand("tomo", "Synthetic homodyne sampling and MaxLik reconstruction");
  tomo->require_subcommand(1);
  std::size_t n_samples = 800000;
  int bins = 12;
  std::uint64_t seed = 1;
  int tomo_dim = 15;
  int max_iters = 2000;
  std::string data_path;
  std::string tomo_out;
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--grid-min", grid_min, "Lower edge of the quadrature grid");
    cmd->add_option("--grid-max", grid_max, "Upper edge of the quadrature grid");
    cmd->add_option("--grid-step", grid_step, "Quadrature bin width");
  };
  auto* t_sample = tomo->add_subcommand("sample", "Draw quadrature samples from a state file");
  t_sample->add_option("--state", state_path, "State file")->required();
  t_sample->add_option("--samples", n_samples, "Number of samples")->check(CLI::PositiveNumber);
  t_sample->add_option("--bins", bins, "Phase bins")->check(CLI::PositiveNumber);
  t_sample->add_option("--seed", seed, "RNG seed");
  t_sample->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  t_sample->add_option("--out", tomo_out, "Output dataset CSV")->required();
  auto* t_recon = tomo->add_subcommand("reconstruct", "MaxLik reconstruction from a dataset CSV");
  t_recon->add_option("--data", data_path, "Dataset CSV")->required();
  t_recon->add_option("--dim", tomo_dim, "Reconstruction cutoff");
  t_recon->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  add_grid(t_recon);
  t_recon->add_option("--out", tomo_out, "Output state file")->required();
  auto* t_round = tomo->add_subcommand("roundtrip", "Sample, reconstruct and report the fidelity");
  t_round->add_option("--state", state_path, "State file")->required();
  t_round->add_option("--samples", n_samples, "Number of samples")->check(CLI::PositiveNumber);
  t_round->add_option("--bins", bins, "Phase bins")->check(CLI::PositiveNumber);
  t_round->add_option("--seed", seed, "RNG seed");
  t_round->add_option("--dim", tomo_dim, "Reconstruction cutoff");
  t_round->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  t_round->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  add_grid(t_round);
  t_round->add_option("--out", tomo_out, "Output prefix (<out>.data.csv, <out>.state.json)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      sim.alpha = sim_alpha;
      const PipelineResult res = run_pipeline(sim);
      for (const auto& w : res.warnings) err << "warning: " << w << '\n';
      save_state(res.rho_out, sim_out);
      write_manifest(sim_out, "simulate", params_json(sim), std::nullopt);
      const double delta = non_gaussianity(res.rho_out);
      const double nu = non_classicality(res.rho_out);
      out << "delta_nats=" << fmt12(delta) << " nu=" << fmt12(nu)
          << " click_weight=" << fmt12(res.click_weight) << '\n';
    } else if (sweep->parsed()) {
      const auto points = sweep_points(sw);
      const auto rows = evaluate_grid(points, jobs);
      auto file = open_output(sweep_out);
      write_sweep_csv(rows, file);
      json params = {{"figure", sw.figure},   {"alpha", sw.alpha}, {"r", sw.r},
                     {"gamma", sw.gamma},     {"xi", sw.xi},       {"eta", sw.eta},
                     {"dim", sw.dim},         {"points", points.size()}};
      if (!sw.figure.empty()) {
        params.erase("alpha");
        params.erase("r");
        params.erase("gamma");
        params.erase("xi");
        params.erase("eta");
      }
      write_manifest(sweep_out, "sweep", std::move(params), std::nullopt);
      out << "wrote " << rows.size() << " rows to " << sweep_out << '\n';
    } else if (measure->parsed()) {
      const DensityMatrix rho = load_state(state_path);
      if (which == "delta") {
        out << fmt12(non_gaussianity(rho)) << '\n';
      } else if (which == "nu") {
        const double nu = non_classicality(rho, grid_from_flags(rho, grid_min, grid_max, grid_step));
        out << fmt12(nu) << '\n' << (nu > 0.0 ? "witnessing" : "non-witnessing") << '\n';
      } else {
        if (measure_out.empty()) throw InvalidArgument("wigner-grid needs --out");
        const WignerGridSpec spec = grid_from_flags(rho, grid_min, grid_max, grid_step);
        const WignerGrid grid = wigner_grid(rho, spec);
        auto file = open_output(measure_out);
        write_wigner_csv(grid, file);
        write_manifest(measure_out, "measure wigner-grid",
                       {{"state", state_path},
                        {"x_min", spec.x_min},
                        {"x_max", spec.x_max},
                        {"p_min", spec.p_min},
                        {"p_max", spec.p_max},
                        {"step", spec.step}},
                       std::nullopt);
        out << fmt12(grid.riemann_sum()) << '\n';
      }
    } else if (t_sample->parsed()) {
      const DensityMatrix rho = load_state(state_path);
      const QuadratureDataset data = sample_quadratures(rho, n_samples, bins, seed, jobs);
      auto file = open_output(tomo_out);
      write_dataset_csv(data, file);
      write_manifest(tomo_out, "tomo sample",
                     {{"state", state_path}, {"samples", n_samples}, {"bins", bins}}, seed);
      out << "wrote " << data.samples.size() << " samples to " << tomo_out << '\n';
    } else if (t_recon->parsed()) {
      std::ifstream in(data_path, std::ios::binary);
      if (!in) throw InvalidArgument("cannot read " + data_path);
      const QuadratureDataset data = read_dataset_csv(in);
      const TomoConfig config = tomo_config(tomo_dim, grid_min, grid_max, grid_step, max_iters);
      const MaxLikResult res = maxlik_reconstruct(data, config);
      save_state(res.rho, tomo_out);
      write_manifest(tomo_out, "tomo reconstruct",
                     {{"data", data_path},
                      {"dim", config.dim},
                      {"x_min", config.x_min},
                      {"x_max", config.x_max},
                      {"n_points", config.n_points},
                      {"max_iters", config.max_iters},
                      {"iterations", res.iterations}},
                     std::nullopt);
      out << "iterations=" << res.iterations << " log_likelihood=" << fmt12(res.log_likelihood.back())
          << '\n';
    } else if (t_round->parsed()) {
      const DensityMatrix rho = load_state(state_path);
      const TomoConfig config = tomo_config(tomo_dim, grid_min, grid_max, grid_step, max_iters);
      const QuadratureDataset data = sample_quadratures(rho, n_samples, bins, seed, jobs);
      const std::string data_file = tomo_out + ".data.csv";
      const std::string state_file = tomo_out + ".state.json";
      {
        auto file = open_output(data_file);
        write_dataset_csv(data, file);
      }
      write_manifest(data_file, "tomo roundtrip",
                     {{"state", state_path}, {"samples", n_samples}, {"bins", bins}}, seed);
      const MaxLikResult res = maxlik_reconstruct(data, config);
      save_state(res.rho, state_file);
      write_manifest(state_file, "tomo roundtrip",
                     {{"state", state_path},
                      {"samples", n_samples},
                      {"bins", bins},
                      {"dim", config.dim},
                      {"n_points", config.n_points},
                      {"iterations", res.iterations}},
                     seed);
      const int common = std::max(rho.dim(), res.rho.dim());
      const double f = fidelity(rho.resized(common), res.rho.resized(common));
      out << "fidelity=" << fmt12(f) << " iterations=" << res.iterations << '\n';
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace fockbench
