#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "fockbench/errors.hpp"
#include "fockbench/measures.hpp"

namespace fockbench {

namespace {

constexpr double kMaxNuStep = 0.05;
constexpr double kCoverageSigmas = 6.0;

// Evaluates W through the Fock-basis kernel
//   W_{|n+k><n|}(x, p) = (-1)^n / pi * sqrt(n!/(n+k)!) * (sqrt2 (x - i p))^k
//                        * L_n^{(k)}(2 r^2) * exp(-r^2),
// with the Laguerre polynomials generated by their three-term recurrence.
class WignerKernel {
 public:
  explicit WignerKernel(const DensityMatrix& rho) : rho_(rho.matrix()), dim_(rho.dim()) {
    // inv_sqrt_binom_(n, k) = sqrt(n! k! / (n+k)!)
    inv_sqrt_binom_.resize(dim_, dim_);
    for (int k = 0; k < dim_; ++k) {
      double v = 1.0;
      for (int n = 0; n + k < dim_; ++n) {
        inv_sqrt_binom_(n, k) = v;
        v *= std::sqrt((n + 1.0) / (n + k + 1.0));
      }
    }
    laguerre_.resize(dim_);
  }

  double operator()(double x, double p) {
    const double r2 = x * x + p * p;
    const double y = 2.0 * r2;
    const Complex z = std::sqrt(2.0) * Complex(x, -p);
    // base = exp(-r^2) z^k / sqrt(k!)
    Complex base = std::exp(-r2);
    double total = 0.0;
    for (int k = 0; k < dim_; ++k) {
      if (k > 0) base *= z / std::sqrt(static_cast<double>(k));
      const int len = dim_ - k;
      laguerre_[0] = 1.0;
      if (len > 1) laguerre_[1] = 1.0 + k - y;
      for (int n = 1; n + 1 < len; ++n) {
        laguerre_[n + 1] = ((2.0 * n + 1.0 + k - y) * laguerre_[n] - (n + k) * laguerre_[n - 1]) / (n + 1.0);
      }
      Complex acc = 0.0;
      double sign = 1.0;
      for (int n = 0; n < len; ++n, sign = -sign) {
        acc += rho_(n + k, n) * (sign * inv_sqrt_binom_(n, k) * laguerre_[n]);
      }
      const double part = (acc * base).real();
      total += (k == 0) ? part : 2.0 * part;
    }
    return total / std::numbers::pi;
  }

 private:
  const Matrix& rho_;
  int dim_;
  Eigen::MatrixXd inv_sqrt_binom_;
  std::vector<double> laguerre_;
};

int axis_points(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidArgument("Wigner grid needs step > 0 and max >= min");
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

}  // namespace

double wigner_eval(const DensityMatrix& rho, double x, double p) {
  WignerKernel kernel(rho);
  return kernel(x, p);
}

int WignerGridSpec::nx() const { return axis_points(x_min, x_max, step); }
int WignerGridSpec::np() const { return axis_points(p_min, p_max, step); }

WignerGrid wigner_grid(const DensityMatrix& rho, const WignerGridSpec& spec) {
  const int nx = spec.nx();
  const int np = spec.np();
  WignerKernel kernel(rho);
  WignerGrid grid{spec, Eigen::MatrixXd(nx, np)};
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < np; ++j) grid.values(i, j) = kernel(spec.x(i), spec.p(j));
  }
  return grid;
}

WignerGridSpec covering_grid(const DensityMatrix& rho, double step, double n_sigma) {
  const GaussianSummary g = gaussian_summary(rho);
  const double sx = std::sqrt(std::max(g.cov(0, 0), 0.0));
  const double sp = std::sqrt(std::max(g.cov(1, 1), 0.0));
  // Snap to multiples of step so nearby states share grid points.
  auto lo = [step](double v) { return std::floor(v / step) * step; };
  auto hi = [step](double v) { return std::ceil(v / step) * step; };
  return {lo(g.mean(0) - n_sigma * sx), hi(g.mean(0) + n_sigma * sx),
          lo(g.mean(1) - n_sigma * sp), hi(g.mean(1) + n_sigma * sp), step};
}

void write_wigner_csv(const WignerGrid& grid, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "x,p,w\n";
  for (int i = 0; i < grid.values.rows(); ++i) {
    for (int j = 0; j < grid.values.cols(); ++j) {
      out << grid.spec.x(i) << ',' << grid.spec.p(j) << ',' << grid.values(i, j) << '\n';
    }
  }
  out.precision(old_precision);
}

NonClassicalityReport non_classicality_report(const DensityMatrix& rho, const WignerGridSpec& spec) {
  if (spec.step > kMaxNuStep + 1e-12) {
    throw InvalidArgument("Wigner grid step must be <= 0.05 for the negativity search");
  }
  const GaussianSummary g = gaussian_summary(rho);
  const double sx = std::sqrt(std::max(g.cov(0, 0), 0.0));
  const double sp = std::sqrt(std::max(g.cov(1, 1), 0.0));
  const double slack = 1e-9;
  if (spec.x_min > g.mean(0) - kCoverageSigmas * sx + slack ||
      spec.x_max < g.mean(0) + kCoverageSigmas * sx - slack ||
      spec.p_min > g.mean(1) - kCoverageSigmas * sp + slack ||
      spec.p_max < g.mean(1) + kCoverageSigmas * sp - slack) {
    throw InvalidArgument("Wigner grid does not cover mean +- 6 standard deviations");
  }

  WignerKernel kernel(rho);
  NonClassicalityReport best;
  best.min_value = std::numeric_limits<double>::infinity();
  const int nx = spec.nx();
  const int np = spec.np();
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < np; ++j) {
      const double w = kernel(spec.x(i), spec.p(j));
      if (w < best.min_value) best = {0.0, w, spec.x(i), spec.p(j)};
    }
  }
  const double fine = spec.step / 10.0;
  const double cx = best.x_at_min;
  const double cp = best.p_at_min;
  for (int i = -10; i <= 10; ++i) {
    for (int j = -10; j <= 10; ++j) {
      const double x = cx + i * fine;
      const double p = cp + j * fine;
      const double w = kernel(x, p);
      if (w < best.min_value) best = {0.0, w, x, p};
    }
  }
  // The single photon's minimum is W(0, 0) = -1/pi.
  best.nu = -std::numbers::pi * best.min_value;
  if (best.nu > 0.0 && best.nu <= kWitnessRoundoff) best.nu = 0.0;
  return best;
}

double non_classicality(const DensityMatrix& rho, const WignerGridSpec& spec) {
  return non_classicality_report(rho, spec).nu;
}

double non_classicality(const DensityMatrix& rho) {
  return non_classicality(rho, covering_grid(rho));
}

}  // namespace fockbench
