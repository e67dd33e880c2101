#pragma once

// Truncated Fock-space states and the linear-optics operations on them.
//
// Quadrature convention, used by every module of the project:
//   x = (a + a^dagger) / sqrt(2),  p = (a - a^dagger) / (i sqrt(2)),  hbar = 1.
// The vacuum has <x^2> = <p^2> = 1/2 and Wigner function exp(-x^2 - p^2) / pi.
// A rotated quadrature is x_theta = x cos(theta) + p sin(theta).

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fockbench {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kDefaultTailTolerance = 1e-6;
inline constexpr int kMaxModes = 4;

// Single-mode density matrix on Fock levels |0>..|dim-1>.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  static DensityMatrix vacuum(int dim);
  static DensityMatrix fock(int n, int dim);
  // |psi><psi|, not renormalized.
  static DensityMatrix pure(const Vector& psi);
  // Thermal state with mean photon number nbar, renormalized on the truncated space.
  static DensityMatrix thermal(double nbar, int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int m, int n) const { return m_(m, n); }

  double trace() const;
  double purity() const;
  double population(int n) const { return m_(n, n).real(); }
  double top_population() const { return population(dim() - 1); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  Eigen::VectorXd eigenvalues() const;

  // Divides by the trace. Throws NumericalError on a non-positive trace.
  DensityMatrix normalized() const;
  // Zero-pads or truncates to a new cutoff. No renormalization.
  DensityMatrix resized(int dim) const;

 private:
  Matrix m_;
};

enum class Mode : std::uint8_t { signal, idler, signal_parasite, idler_parasite };

std::string_view to_string(Mode mode);

struct ModePair {
  Mode first;
  Mode second;

  ModePair(Mode a, Mode b);
};

// Pure (possibly sub-normalized) state on up to four truncated modes.
// Amplitudes are stored row-major over the mode order: for modes (m0, m1, ...)
// with cutoffs (d0, d1, ...) the index is n0 * (d1 * d2 * ...) + n1 * (d2 * ...) + ...
class MultiModeState {
 public:
  // Vacuum on every mode.
  MultiModeState(std::vector<Mode> labels, std::vector<int> dims);

  static MultiModeState single(Mode mode, Vector amplitudes);
  // Tensor product; the modes of `rhs` are appended after ours.
  MultiModeState tensor(const MultiModeState& rhs) const;

  int num_modes() const { return static_cast<int>(labels_.size()); }
  const std::vector<Mode>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim_of(Mode mode) const { return dims_[position(mode)]; }
  bool has_mode(Mode mode) const;
  // Position in the label list; throws InvalidArgument for unknown modes.
  int position(Mode mode) const;
  std::size_t stride(int position) const;

  const Vector& amplitudes() const { return amps_; }
  Vector& amplitudes() { return amps_; }
  Complex amplitude(const std::vector<int>& levels) const;

  double norm_sq() const { return amps_.squaredNorm(); }
  MultiModeState normalized() const;
  // Population of the highest kept level of one mode.
  double top_population(Mode mode) const;

 private:
  std::vector<Mode> labels_;
  std::vector<int> dims_;
  Vector amps_;
};

// Result of an operation that may leave the state sub-normalized.
//   coherent_state: norm_sq is the Poisson mass captured before renormalization.
//   ladder operators: norm_sq is the squared norm of the output.
// tail_mass is the probability weight lost to (or sitting at) the cutoff.
struct StateResult {
  MultiModeState state;
  double norm_sq = 0.0;
  double tail_mass = 0.0;

  bool tail_warning(double tolerance = kDefaultTailTolerance) const {
    return tail_mass > tolerance;
  }
};

StateResult coherent_state(Complex alpha, int dim, Mode mode = Mode::signal);

StateResult apply_creation(const MultiModeState& state, Mode mode);
StateResult apply_annihilation(const MultiModeState& state, Mode mode);

// exp(r (a^dagger b^dagger - a b)) with a, b the pair's modes, exponentiated
// exactly on the truncated space.
MultiModeState two_mode_squeeze(const MultiModeState& state, ModePair pair, double r);

// Reduced state of `keep`. The trace equals the input's squared norm.
DensityMatrix partial_trace(const MultiModeState& state, Mode keep);

// Pure-loss channel of transmissivity eta.
DensityMatrix loss_channel(const DensityMatrix& rho, double eta);

DensityMatrix mix(const DensityMatrix& rho_a, const DensityMatrix& rho_b, double w);

// Uhlmann fidelity in squared form, (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

// Single-mode operator matrices on the truncated space.
Matrix annihilation_operator(int dim);
Matrix quadrature_x(int dim);
Matrix quadrature_p(int dim);

// Gaussian unitaries. Displacement and squeezing are exponentiated on an
// enlarged space and cut back, so they are accurate away from the cutoff.
Matrix displacement_operator(Complex beta, int dim);
// exp((s/2)(a^2 - a^dagger^2)): for real s > 0 the x quadrature variance shrinks by e^{-2s}.
Matrix squeeze_operator(double s, int dim);
// exp(i phi n): rotates phase space counterclockwise, <a> -> e^{i phi} <a>.
Matrix rotation_operator(double phi, int dim);

DensityMatrix apply_unitary(const Matrix& u, const DensityMatrix& rho);
DensityMatrix displace(const DensityMatrix& rho, Complex beta);
DensityMatrix rotate(const DensityMatrix& rho, double phi);

}  // namespace fockbench
