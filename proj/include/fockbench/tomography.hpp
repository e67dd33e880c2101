#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fockbench/fock.hpp"

namespace fockbench {

// Oscillator eigenfunctions psi_0..psi_{dim-1} at x, with |psi_0|^2 = exp(-x^2)/sqrt(pi).
Eigen::VectorXd hermite_functions(int dim, double x);

// Probability density of the rotated quadrature x_theta = x cos(theta) + p sin(theta).
double homodyne_pdf(const DensityMatrix& rho, double theta, double x);

struct QuadratureSample {
  int bin = 0;
  double x = 0.0;

  bool operator==(const QuadratureSample&) const = default;
};

struct QuadratureDataset {
  int n_bins = 12;
  std::vector<double> phases;  // phases[b] = b * pi / n_bins
  std::vector<QuadratureSample> samples;

  static std::vector<double> uniform_phases(int n_bins);
  // Throws InvalidArgument on bad bins or non-increasing phases.
  void validate() const;
};

// Samples are split into chunks of kSampleChunk; chunk c draws from a
// mt19937_64 seeded with seed_seq{seed low 32 bits, seed high 32 bits, c}, so
// the output does not depend on `jobs`. Each sample takes a uniform phase bin,
// then x by inverse CDF over a dense tabulation of homodyne_pdf.
inline constexpr std::size_t kSampleChunk = 65536;

QuadratureDataset sample_quadratures(const DensityMatrix& rho, std::size_t n_samples, int n_bins,
                                     std::uint64_t seed, int jobs = 1);

struct TomoConfig {
  int dim = 15;
  double x_min = -6.0;
  double x_max = 6.0;
  int n_points = 400;  // quadrature bins per phase
  int max_iters = 2000;
  double log_lik_tol = 1e-10;  // on the per-sample log-likelihood

  void validate() const;
};

struct MaxLikResult {
  DensityMatrix rho;
  std::vector<double> log_likelihood;  // entry 0 is the maximally mixed start
  int iterations = 0;
  bool converged = false;
  std::size_t dropped_samples = 0;  // outside [x_min, x_max]
};

// Iterative R rho R reconstruction over the binned quadrature projectors.
// When a full step would lower the likelihood the step is diluted,
// rho <- N[(1 + eps R) rho (1 + eps R)], halving eps until it does not, so the
// log-likelihood never decreases.
MaxLikResult maxlik_reconstruct(const QuadratureDataset& data, const TomoConfig& config);

// Per-sample log-likelihood of binned data under rho; exposed for tests.
double binned_log_likelihood(const QuadratureDataset& data, const TomoConfig& config,
                             const DensityMatrix& rho);

// CSV "bin,phase_rad,x".
void write_dataset_csv(const QuadratureDataset& data, std::ostream& out);
QuadratureDataset read_dataset_csv(std::istream& in);

}  // namespace fockbench
