#pragma once

#include <cmath>
#include <random>

#include "fockbench/fock.hpp"
#include "fockbench/measures.hpp"

namespace fockbench::testing {

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

// Random mixed state of the given rank, populated only on levels < support,
// embedded in a cutoff of `dim`.
inline DensityMatrix random_state(std::mt19937_64& rng, int dim, int support, int rank) {
  Matrix g = Matrix::Zero(dim, rank);
  for (int i = 0; i < support; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = random_complex(rng);
  Matrix rho = g * g.adjoint();
  return DensityMatrix(rho / rho.trace().real());
}

inline DensityMatrix random_state(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> rank(1, dim);
  return random_state(rng, dim, dim, rank(rng));
}

inline Vector random_vector(std::mt19937_64& rng, int dim, int support) {
  Vector v = Vector::Zero(dim);
  for (int i = 0; i < support; ++i) v(i) = random_complex(rng);
  return v.normalized();
}

inline bool is_physical(const DensityMatrix& rho, double trace_tol = 1e-10) {
  return rho.hermiticity_error() <= 1e-12 && std::abs(rho.trace() - 1.0) <= trace_tol &&
         rho.min_eigenvalue() >= -1e-10;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Marginal of the Wigner function over p, by the trapezoid rule on [-half_width, half_width].
inline double wigner_x_marginal(const DensityMatrix& rho, double x, double half_width = 10.0,
                                double step = 0.01) {
  const int n = static_cast<int>(std::lround(2.0 * half_width / step));
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = wigner_eval(rho, x, -half_width + k * step);
    sum += (k == 0 || k == n) ? 0.5 * w : w;
  }
  return sum * step;
}

}  // namespace fockbench::testing
