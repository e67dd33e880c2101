#include "fockbench/measures.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fockbench/errors.hpp"

namespace fockbench {

namespace {

constexpr double kHeisenbergBound = 0.25;
constexpr double kHeisenbergTolerance = 1e-9;
constexpr double kEigenvalueFloor = 1e-14;
constexpr double kNegativeEigenvalueTolerance = 1e-8;
constexpr double kDeltaClipTolerance = 1e-8;

double thermal_entropy_from_symplectic(double nu) {
  const double plus = nu + 0.5;
  const double minus = nu - 0.5;
  double s = plus * std::log(plus);
  if (minus > 0.0) s -= minus * std::log(minus);
  return s;
}

}  // namespace

double GaussianSummary::symplectic_eigenvalue() const { return std::sqrt(std::max(cov.determinant(), 0.0)); }

GaussianSummary gaussian_summary(const DensityMatrix& rho) {
  // Moments from <a>, <a^2> and <n>: these are exact on the truncated space,
  // whereas products of truncated x and p matrices are wrong at the top level.
  const int dim = rho.dim();
  const Matrix& m = rho.matrix();
  Complex ea = 0.0;
  Complex ea2 = 0.0;
  double en = 0.0;
  for (int n = 0; n < dim; ++n) {
    en += n * m(n, n).real();
    // Tr(rho a) = sum_n rho(n, n-1) sqrt(n)
    if (n >= 1) ea += m(n, n - 1) * std::sqrt(static_cast<double>(n));
    if (n >= 2) ea2 += m(n, n - 2) * std::sqrt(static_cast<double>(n) * (n - 1));
  }
  const double tr = rho.trace();
  ea /= tr;
  ea2 /= tr;
  en /= tr;

  GaussianSummary out;
  out.mean << std::sqrt(2.0) * ea.real(), std::sqrt(2.0) * ea.imag();
  const double xx = ea2.real() + en + 0.5;
  const double pp = -ea2.real() + en + 0.5;
  const double xp = ea2.imag();
  out.cov(0, 0) = xx - out.mean(0) * out.mean(0);
  out.cov(1, 1) = pp - out.mean(1) * out.mean(1);
  out.cov(0, 1) = out.cov(1, 0) = xp - out.mean(0) * out.mean(1);
  return out;
}

double gaussian_entropy(const GaussianSummary& summary) {
  const double det = summary.cov.determinant();
  if (!(det >= kHeisenbergBound - kHeisenbergTolerance)) {
    throw NumericalError("unphysical covariance: det = " + std::to_string(det) + " < 1/4");
  }
  return thermal_entropy_from_symplectic(std::sqrt(std::max(det, kHeisenbergBound)));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd vals = rho.eigenvalues();
  if (vals.minCoeff() < -kNegativeEigenvalueTolerance) {
    throw NumericalError("state is not positive semidefinite (eigenvalue " +
                         std::to_string(vals.minCoeff()) + ")");
  }
  double s = 0.0;
  for (double v : vals) {
    if (v > kEigenvalueFloor) s -= v * std::log(v);
  }
  return s;
}

NonGaussianityReport non_gaussianity_report(const DensityMatrix& rho) {
  NonGaussianityReport r;
  r.reference_entropy = gaussian_entropy(gaussian_summary(rho));
  r.state_entropy = von_neumann_entropy(rho);
  r.delta = r.reference_entropy - r.state_entropy;
  if (r.delta < 0.0) {
    if (r.delta < -kDeltaClipTolerance) {
      throw NumericalError("negative non-Gaussianity " + std::to_string(r.delta));
    }
    r.delta = 0.0;
    r.clipped = true;
  }
  return r;
}

double non_gaussianity(const DensityMatrix& rho) { return non_gaussianity_report(rho).delta; }

DensityMatrix gaussian_reference_state(const GaussianSummary& summary, int dim) {
  const double nu = summary.symplectic_eigenvalue();
  if (nu < 0.5 - kHeisenbergTolerance) throw NumericalError("unphysical covariance");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(summary.cov);
  const double narrow = es.eigenvalues()(0);
  const Eigen::Vector2d axis = es.eigenvectors().col(0);
  const double squeeze = 0.5 * std::log(nu / narrow);
  const double angle = std::atan2(axis(1), axis(0));

  // Build on a larger space so squeezing and displacement stay accurate, then cut.
  const int work = dim + 30;
  DensityMatrix tau = DensityMatrix::thermal(std::max(nu - 0.5, 0.0), work);
  tau = apply_unitary(squeeze_operator(squeeze, work), tau);
  tau = rotate(tau, angle);
  tau = displace(tau, Complex(summary.mean(0), summary.mean(1)) / std::sqrt(2.0));
  return tau.resized(dim);
}

}  // namespace fockbench
