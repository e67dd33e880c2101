#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fockbench/fock.hpp"

namespace fockbench {

// Cutoff used when none is given: 20 up to |alpha| = 1, 25 up to 1.5, then
// 10 more levels per unit of amplitude.
int default_dim(double abs_alpha);

// Noise model of the photon-addition experiment. The signal s is seeded with
// |alpha>, the idler i heralds, and s', i' are the parasitic modes.
struct ExperimentParams {
  Complex alpha = 0.0;
  double r = 0.0;      // squeezing of the s-i interaction
  double gamma = 0.0;  // parasitic squeezing strength, as a fraction of r
  double xi = 1.0;     // probability that a click comes from the matched mode
  double eta = 1.0;    // homodyne efficiency
  int dim = 0;         // signal cutoff; 0 picks default_dim(|alpha|)
  int aux_dim = 0;     // cutoff of i, s', i'; 0 uses the signal cutoff
  std::size_t max_amplitudes = 25 * 25 * 25 * 25;
  double tail_tolerance = kDefaultTailTolerance;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
  int signal_dim() const;
  int auxiliary_dim() const;
};

struct PipelineResult {
  DensityMatrix rho_out;      // measured signal state, after the xi mixture and loss
  DensityMatrix rho_success;  // click from the matched mode
  DensityMatrix rho_faulty;   // click carrying no information on the signal
  double click_weight = 0.0;  // squared norm after a_i, relative to the input
  std::vector<std::string> warnings;
};

// (1 + |alpha|^2)^{-1/2} a^dagger |alpha>, as a projector. Throws
// InvalidArgument if the cutoff leaves more than the tail tolerance behind.
DensityMatrix ideal_photon_added_state(Complex alpha, int dim,
                                       double tail_tolerance = kDefaultTailTolerance);

PipelineResult run_pipeline(const ExperimentParams& params);

struct SweepRow {
  double alpha = 0.0;
  double r = 0.0;
  double gamma = 0.0;
  double xi = 1.0;
  double eta = 1.0;
  double delta = 0.0;
  double nu = 0.0;
  double click_weight = 0.0;
};

// Runs the pipeline and both measures for one parameter point.
SweepRow evaluate_point(const ExperimentParams& params);

// Evaluates every point, in parallel up to `jobs` threads. Row i always
// belongs to points[i]. jobs <= 0 means hardware concurrency.
std::vector<SweepRow> evaluate_grid(const std::vector<ExperimentParams>& points, int jobs = 1);

// `base` supplies everything but alpha; the cutoff follows each alpha unless base.dim is set.
std::vector<SweepRow> sweep_alpha(const ExperimentParams& base, const std::vector<double>& alphas,
                                  int jobs = 1);

enum class NoiseKnob { gamma, xi, eta };

NoiseKnob parse_noise_knob(const std::string& name);

// One knob varied, the others at their ideal values (gamma 0, xi 1, eta 1).
std::vector<SweepRow> sweep_noise(double alpha, double r, NoiseKnob knob,
                                  const std::vector<double>& values, int jobs = 1);

// Header "alpha,r,gamma,xi,eta,delta_nats,nu,click_weight".
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace fockbench
