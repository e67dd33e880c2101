#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "fockbench/fock.hpp"

namespace fockbench {

// First and second moments of (x, p). Entropies are in nats throughout.
struct GaussianSummary {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity() * kVacuumVariance;

  // sqrt(det cov); 1/2 for pure Gaussian states.
  double symplectic_eigenvalue() const;
};

GaussianSummary gaussian_summary(const DensityMatrix& rho);

// Entropy of the Gaussian state with this covariance. Throws NumericalError
// when det cov < 1/4 beyond 1e-9.
double gaussian_entropy(const GaussianSummary& summary);

double von_neumann_entropy(const DensityMatrix& rho);

struct NonGaussianityReport {
  double delta = 0.0;
  double reference_entropy = 0.0;
  double state_entropy = 0.0;
  // Set when a slightly negative value (> -1e-8) from eigenvalue noise was clipped to 0.
  bool clipped = false;
};

NonGaussianityReport non_gaussianity_report(const DensityMatrix& rho);

// Relative entropy to the Gaussian state with matching moments, S(tau) - S(rho).
double non_gaussianity(const DensityMatrix& rho);

// Gaussian state with the given moments, built as displaced, rotated,
// squeezed thermal light.
DensityMatrix gaussian_reference_state(const GaussianSummary& summary, int dim);

// --- Wigner function --------------------------------------------------------

double wigner_eval(const DensityMatrix& rho, double x, double p);

// Inclusive bounds on both axes, same step on both.
struct WignerGridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  double step = 0.05;

  int nx() const;
  int np() const;
  double x(int i) const { return x_min + i * step; }
  double p(int j) const { return p_min + j * step; }
};

struct WignerGrid {
  WignerGridSpec spec;
  Eigen::MatrixXd values;  // values(i, j) = W(x_i, p_j)

  double riemann_sum() const { return values.sum() * spec.step * spec.step; }
};

WignerGrid wigner_grid(const DensityMatrix& rho, const WignerGridSpec& spec);

// Mean +- n_sigma standard deviations on each axis.
WignerGridSpec covering_grid(const DensityMatrix& rho, double step = 0.05, double n_sigma = 6.0);

// CSV with header "x,p,w", rows ordered by x then p.
void write_wigner_csv(const WignerGrid& grid, std::ostream& out);

// Negativity below this (in units of 1/pi) is truncation/rounding noise and
// is reported as nu = 0.
inline constexpr double kWitnessRoundoff = 1e-10;

struct NonClassicalityReport {
  double nu = 0.0;
  double min_value = 0.0;  // smallest W found
  double x_at_min = 0.0;
  double p_at_min = 0.0;
};

// nu = min W / min W_{|1>} = -pi * min W, found on the grid and refined once
// around the grid minimum at step/10. Positive values witness non-classicality.
// The grid must cover mean +- 6 standard deviations with step <= 0.05.
NonClassicalityReport non_classicality_report(const DensityMatrix& rho, const WignerGridSpec& spec);
double non_classicality(const DensityMatrix& rho, const WignerGridSpec& spec);
double non_classicality(const DensityMatrix& rho);

}  // namespace fockbench
