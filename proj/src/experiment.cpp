#include "fockbench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fockbench/errors.hpp"
#include "fockbench/measures.hpp"

namespace fockbench {

namespace {

void require_range(double v, double lo, double hi, const char* name) {
  if (!std::isfinite(v) || v < lo || v > hi) {
    std::ostringstream msg;
    msg << name << " = " << v << " outside [" << lo << ", " << hi << "]";
    throw InvalidArgument(msg.str());
  }
}

std::string tail_message(const char* where, double mass) {
  std::ostringstream msg;
  msg << "truncation tail " << mass << " at " << where;
  return msg.str();
}

}  // namespace

int default_dim(double abs_alpha) {
  if (abs_alpha <= 1.0) return 20;
  if (abs_alpha <= 1.5) return 25;
  return 25 + 10 * static_cast<int>(std::ceil(abs_alpha - 1.5));
}

void ExperimentParams::validate() const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw InvalidArgument("alpha must be finite");
  }
  if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("r must be finite and >= 0");
  require_range(gamma, 0.0, 1.0, "gamma");
  require_range(xi, 0.0, 1.0, "xi");
  require_range(eta, 0.0, 1.0, "eta");
  if (dim != 0 && dim < 2) throw InvalidArgument("dim must be >= 2");
  if (aux_dim != 0 && aux_dim < 2) throw InvalidArgument("aux dim must be >= 2");
  const auto ds = static_cast<std::size_t>(signal_dim());
  const auto da = static_cast<std::size_t>(auxiliary_dim());
  const std::size_t parasites = gamma > 0.0 ? da * da : 1;
  if (ds * da * parasites > max_amplitudes) {
    throw InvalidArgument("four-mode state exceeds the amplitude cap");
  }
}

int ExperimentParams::signal_dim() const { return dim != 0 ? dim : default_dim(std::abs(alpha)); }

int ExperimentParams::auxiliary_dim() const { return aux_dim != 0 ? aux_dim : signal_dim(); }

DensityMatrix ideal_photon_added_state(Complex alpha, int dim, double tail_tolerance) {
  StateResult coh = coherent_state(alpha, dim);
  StateResult added = apply_creation(coh.state, Mode::signal);
  const double tail = coh.tail_mass + added.tail_mass / added.norm_sq +
                      added.state.top_population(Mode::signal) / added.norm_sq;
  if (tail > tail_tolerance) {
    throw InvalidArgument("cutoff " + std::to_string(dim) + " too small for |alpha| = " +
                          std::to_string(std::abs(alpha)));
  }
  return DensityMatrix::pure(added.state.normalized().amplitudes());
}

PipelineResult run_pipeline(const ExperimentParams& params) {
  params.validate();
  const int ds = params.signal_dim();
  const int da = params.auxiliary_dim();
  // Without parasitic gain s' and i' stay in vacuum; a one-level cutoff is exact.
  const int dp = params.gamma > 0.0 ? da : 1;
  std::vector<std::string> warnings;

  StateResult coh = coherent_state(params.alpha, ds, Mode::signal);
  if (coh.tail_warning(params.tail_tolerance)) warnings.push_back(tail_message("input coherent state", coh.tail_mass));

  MultiModeState state = coh.state.tensor(
      MultiModeState({Mode::idler, Mode::signal_parasite, Mode::idler_parasite}, {da, dp, dp}));

  // Rightmost squeezer acts first.
  const double weak = params.gamma * params.r;
  state = two_mode_squeeze(state, {Mode::signal_parasite, Mode::idler}, weak);
  state = two_mode_squeeze(state, {Mode::signal, Mode::idler_parasite}, weak);
  state = two_mode_squeeze(state, {Mode::signal, Mode::idler}, params.r);

  for (Mode m : state.labels()) {
    if (state.dim_of(m) < 2) continue;
    const double top = state.top_population(m);
    if (top > params.tail_tolerance) {
      warnings.push_back(tail_message(("squeezed mode " + std::string(to_string(m))).c_str(), top));
    }
  }

  StateResult clicked = apply_annihilation(state, Mode::idler);
  if (!(clicked.norm_sq > 0.0)) {
    throw NumericalError("heralding probability vanishes (r = 0 never clicks)");
  }
  DensityMatrix rho_success = partial_trace(clicked.state, Mode::signal).normalized();
  DensityMatrix rho_faulty = partial_trace(state, Mode::signal).normalized();
  DensityMatrix rho_out = loss_channel(mix(rho_success, rho_faulty, params.xi), params.eta);

  if (rho_success.top_population() > params.tail_tolerance) {
    warnings.push_back(tail_message("heralded signal", rho_success.top_population()));
  }
  return {std::move(rho_out), std::move(rho_success), std::move(rho_faulty), clicked.norm_sq,
          std::move(warnings)};
}

SweepRow evaluate_point(const ExperimentParams& params) {
  const PipelineResult res = run_pipeline(params);
  SweepRow row;
  row.alpha = std::abs(params.alpha);
  row.r = params.r;
  row.gamma = params.gamma;
  row.xi = params.xi;
  row.eta = params.eta;
  row.delta = non_gaussianity(res.rho_out);
  row.nu = non_classicality(res.rho_out);
  row.click_weight = res.click_weight;
  return row;
}

std::vector<SweepRow> evaluate_grid(const std::vector<ExperimentParams>& points, int jobs) {
  for (const auto& p : points) p.validate();
  std::vector<SweepRow> rows(points.size());
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(points.size(), 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = evaluate_point(points[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = points.size();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SweepRow> sweep_alpha(const ExperimentParams& base, const std::vector<double>& alphas,
                                  int jobs) {
  if (alphas.empty()) throw InvalidArgument("alpha sweep needs at least one value");
  std::vector<ExperimentParams> points;
  points.reserve(alphas.size());
  for (double a : alphas) {
    ExperimentParams p = base;
    p.alpha = a;
    points.push_back(p);
  }
  return evaluate_grid(points, jobs);
}

NoiseKnob parse_noise_knob(const std::string& name) {
  if (name == "gamma") return NoiseKnob::gamma;
  if (name == "xi") return NoiseKnob::xi;
  if (name == "eta") return NoiseKnob::eta;
  throw InvalidArgument("unknown noise knob '" + name + "' (expected gamma, xi or eta)");
}

std::vector<SweepRow> sweep_noise(double alpha, double r, NoiseKnob knob,
                                  const std::vector<double>& values, int jobs) {
  if (values.empty()) throw InvalidArgument("noise sweep needs at least one value");
  std::vector<ExperimentParams> points;
  points.reserve(values.size());
  for (double v : values) {
    ExperimentParams p;
    p.alpha = alpha;
    p.r = r;
    switch (knob) {
      case NoiseKnob::gamma: p.gamma = v; break;
      case NoiseKnob::xi: p.xi = v; break;
      case NoiseKnob::eta: p.eta = v; break;
    }
    points.push_back(p);
  }
  return evaluate_grid(points, jobs);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "alpha,r,gamma,xi,eta,delta_nats,nu,click_weight\n";
  for (const auto& row : rows) {
    out << row.alpha << ',' << row.r << ',' << row.gamma << ',' << row.xi << ',' << row.eta << ','
        << row.delta << ',' << row.nu << ',' << row.click_weight << '\n';
  }
  out.precision(old_precision);
}

}  // namespace fockbench
