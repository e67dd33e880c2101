#include "fockbench/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "fockbench/errors.hpp"

namespace fockbench {

namespace {

void require_dim(int dim, int min_dim = 1) {
  if (dim < min_dim) {
    throw InvalidArgument("invalid dimension " + std::to_string(dim) + " (need >= " +
                          std::to_string(min_dim) + ")");
  }
}

Eigen::VectorXd hermitian_eigen(const Matrix& m, Matrix& vecs) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  vecs = es.eigenvectors();
  return es.eigenvalues();
}

// Number of extra levels used when exponentiating unbounded generators.
constexpr int kExpPadding = 30;

}  // namespace

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw InvalidArgument("density matrix must be square and non-empty");
  }
}

DensityMatrix DensityMatrix::vacuum(int dim) { return fock(0, dim); }

DensityMatrix DensityMatrix::fock(int n, int dim) {
  require_dim(dim);
  if (n < 0 || n >= dim) {
    throw InvalidArgument("Fock level " + std::to_string(n) + " outside cutoff " +
                          std::to_string(dim));
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(n, n) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::thermal(double nbar, int dim) {
  require_dim(dim);
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw InvalidArgument("thermal mean photon number must be finite and >= 0");
  }
  Matrix m = Matrix::Zero(dim, dim);
  if (nbar == 0.0) {
    m(0, 0) = 1.0;
    return DensityMatrix(std::move(m));
  }
  const double ratio = nbar / (1.0 + nbar);
  double w = 1.0 / (1.0 + nbar);
  for (int n = 0; n < dim; ++n, w *= ratio) m(n, n) = w;
  return DensityMatrix(std::move(m)).normalized();
}

double DensityMatrix::trace() const { return m_.trace().real(); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Matrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

DensityMatrix DensityMatrix::normalized() const {
  const double t = trace();
  if (!(t > 0.0)) throw NumericalError("cannot normalize a state with zero trace");
  return DensityMatrix(m_ / t);
}

DensityMatrix DensityMatrix::resized(int dim) const {
  require_dim(dim);
  Matrix m = Matrix::Zero(dim, dim);
  const int k = std::min(dim, this->dim());
  m.topLeftCorner(k, k) = m_.topLeftCorner(k, k);
  return DensityMatrix(std::move(m));
}

// --- Modes ------------------------------------------------------------------

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::signal: return "s";
    case Mode::idler: return "i";
    case Mode::signal_parasite: return "s'";
    case Mode::idler_parasite: return "i'";
  }
  return "?";
}

ModePair::ModePair(Mode a, Mode b) : first(a), second(b) {
  if (a == b) throw InvalidArgument("mode pair needs two distinct modes");
}

MultiModeState::MultiModeState(std::vector<Mode> labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.empty() || labels_.size() > static_cast<std::size_t>(kMaxModes)) {
    throw InvalidArgument("a multimode state holds 1 to 4 modes");
  }
  if (labels_.size() != dims_.size()) {
    throw InvalidArgument("mode labels and cutoffs differ in length");
  }
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    require_dim(dims_[k]);
    for (std::size_t j = 0; j < k; ++j) {
      if (labels_[j] == labels_[k]) {
        throw InvalidArgument("duplicate mode label " + std::string(to_string(labels_[k])));
      }
    }
  }
  const std::size_t total =
      std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  amps_ = Vector::Zero(static_cast<Eigen::Index>(total));
  amps_(0) = 1.0;
}

MultiModeState MultiModeState::single(Mode mode, Vector amplitudes) {
  MultiModeState out({mode}, {static_cast<int>(amplitudes.size())});
  out.amps_ = std::move(amplitudes);
  return out;
}

MultiModeState MultiModeState::tensor(const MultiModeState& rhs) const {
  std::vector<Mode> labels = labels_;
  std::vector<int> dims = dims_;
  labels.insert(labels.end(), rhs.labels_.begin(), rhs.labels_.end());
  dims.insert(dims.end(), rhs.dims_.begin(), rhs.dims_.end());
  MultiModeState out(std::move(labels), std::move(dims));
  const Eigen::Index nr = rhs.amps_.size();
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    out.amps_.segment(i * nr, nr) = amps_(i) * rhs.amps_;
  }
  return out;
}

bool MultiModeState::has_mode(Mode mode) const {
  return std::find(labels_.begin(), labels_.end(), mode) != labels_.end();
}

int MultiModeState::position(Mode mode) const {
  auto it = std::find(labels_.begin(), labels_.end(), mode);
  if (it == labels_.end()) {
    throw InvalidArgument("unknown mode " + std::string(to_string(mode)));
  }
  return static_cast<int>(it - labels_.begin());
}

std::size_t MultiModeState::stride(int position) const {
  std::size_t s = 1;
  for (int k = position + 1; k < num_modes(); ++k) s *= static_cast<std::size_t>(dims_[k]);
  return s;
}

Complex MultiModeState::amplitude(const std::vector<int>& levels) const {
  if (levels.size() != dims_.size()) throw InvalidArgument("wrong number of mode levels");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (levels[k] < 0 || levels[k] >= dims_[k]) throw InvalidArgument("level outside cutoff");
    idx = idx * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(levels[k]);
  }
  return amps_(static_cast<Eigen::Index>(idx));
}

MultiModeState MultiModeState::normalized() const {
  const double n2 = norm_sq();
  if (!(n2 > 0.0)) throw NumericalError("cannot normalize a zero state vector");
  MultiModeState out = *this;
  out.amps_ /= std::sqrt(n2);
  return out;
}

double MultiModeState::top_population(Mode mode) const {
  const int pos = position(mode);
  const std::size_t st = stride(pos);
  const std::size_t d = static_cast<std::size_t>(dims_[pos]);
  double pop = 0.0;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if ((static_cast<std::size_t>(i) / st) % d == d - 1) pop += std::norm(amps_(i));
  }
  return pop;
}

// --- Preparation and ladder operators ---------------------------------------

StateResult coherent_state(Complex alpha, int dim, Mode mode) {
  require_dim(dim, 2);
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw InvalidArgument("coherent amplitude must be finite");
  }
  Vector amps(dim);
  // alpha^n / sqrt(n!) built incrementally.
  Complex term = std::exp(-0.5 * std::norm(alpha));
  amps(0) = term;
  for (int n = 1; n < dim; ++n) {
    term *= alpha / std::sqrt(static_cast<double>(n));
    amps(n) = term;
  }
  const double captured = amps.squaredNorm();
  amps /= std::sqrt(captured);
  return {MultiModeState::single(mode, std::move(amps)), captured,
          std::max(0.0, 1.0 - captured)};
}

StateResult apply_creation(const MultiModeState& state, Mode mode) {
  const int pos = state.position(mode);
  const std::size_t st = state.stride(pos);
  const std::size_t d = static_cast<std::size_t>(state.dims()[pos]);
  const Vector& in = state.amplitudes();
  MultiModeState out = state;
  Vector& amps = out.amplitudes();
  amps.setZero();
  double lost = 0.0;
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    const std::size_t n = (static_cast<std::size_t>(i) / st) % d;
    const double f = std::sqrt(static_cast<double>(n + 1));
    if (n + 1 < d) {
      amps(i + static_cast<Eigen::Index>(st)) = f * in(i);
    } else {
      lost += f * f * std::norm(in(i));
    }
  }
  const double norm_sq = amps.squaredNorm();
  return {std::move(out), norm_sq, lost};
}

StateResult apply_annihilation(const MultiModeState& state, Mode mode) {
  const int pos = state.position(mode);
  const std::size_t st = state.stride(pos);
  const std::size_t d = static_cast<std::size_t>(state.dims()[pos]);
  const Vector& in = state.amplitudes();
  MultiModeState out = state;
  Vector& amps = out.amplitudes();
  amps.setZero();
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    const std::size_t n = (static_cast<std::size_t>(i) / st) % d;
    if (n > 0) amps(i - static_cast<Eigen::Index>(st)) = std::sqrt(static_cast<double>(n)) * in(i);
  }
  const double norm_sq = amps.squaredNorm();
  return {std::move(out), norm_sq, 0.0};
}

// --- Two-mode squeezing -----------------------------------------------------
//
// The generator a^dagger b^dagger - a b conserves n_a - n_b, so the truncated
// space splits into chains {(k + da, k + db)} with one of da, db zero. On each
// chain the generator is a real antisymmetric tridiagonal matrix, exponentiated
// exactly (Pade scaling and squaring).

MultiModeState two_mode_squeeze(const MultiModeState& state, ModePair pair, double r) {
  if (!std::isfinite(r)) throw InvalidArgument("squeezing parameter must be finite");
  const int pa = state.position(pair.first);
  const int pb = state.position(pair.second);
  if (r == 0.0) return state;

  const int da = state.dims()[pa];
  const int db = state.dims()[pb];
  const std::size_t sa = state.stride(pa);
  const std::size_t sb = state.stride(pb);

  struct Chain {
    int offset_a, offset_b, length;
    Eigen::MatrixXd propagator;
  };
  std::vector<Chain> chains;
  for (int diff = -(db - 1); diff <= da - 1; ++diff) {
    const int oa = std::max(diff, 0);
    const int ob = std::max(-diff, 0);
    const int len = std::min(da - oa, db - ob);
    if (len < 2) continue;  // single-element chains are untouched
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(len, len);
    for (int k = 0; k + 1 < len; ++k) {
      const double c = std::sqrt(static_cast<double>(oa + k + 1) * static_cast<double>(ob + k + 1));
      gen(k + 1, k) = c;
      gen(k, k + 1) = -c;
    }
    Eigen::MatrixXd prop = (r * gen).exp();
    chains.push_back({oa, ob, len, std::move(prop)});
  }

  const Vector& in = state.amplitudes();
  MultiModeState out = state;
  Vector& amps = out.amplitudes();
  Vector buf;
  for (Eigen::Index base = 0; base < in.size(); ++base) {
    const auto ub = static_cast<std::size_t>(base);
    if ((ub / sa) % static_cast<std::size_t>(da) != 0) continue;
    if ((ub / sb) % static_cast<std::size_t>(db) != 0) continue;
    for (const Chain& ch : chains) {
      const std::size_t start = ub + static_cast<std::size_t>(ch.offset_a) * sa +
                                static_cast<std::size_t>(ch.offset_b) * sb;
      const std::size_t step = sa + sb;
      buf.resize(ch.length);
      for (int k = 0; k < ch.length; ++k) buf(k) = in(static_cast<Eigen::Index>(start + k * step));
      Vector res = ch.propagator.cast<Complex>() * buf;
      for (int k = 0; k < ch.length; ++k) amps(static_cast<Eigen::Index>(start + k * step)) = res(k);
    }
  }
  return out;
}

// --- Reduction and channels -------------------------------------------------

DensityMatrix partial_trace(const MultiModeState& state, Mode keep) {
  const int pos = state.position(keep);
  const std::size_t st = state.stride(pos);
  const auto d = static_cast<std::size_t>(state.dims()[pos]);
  const Vector& in = state.amplitudes();
  const std::size_t rest = static_cast<std::size_t>(in.size()) / d;
  Matrix block(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rest));
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const std::size_t n = (ui / st) % d;
    const std::size_t other = (ui / (st * d)) * st + ui % st;
    block(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(other)) = in(i);
  }
  Matrix rho = block * block.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

DensityMatrix loss_channel(const DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("loss transmissivity eta must lie in [0, 1]");
  }
  const int dim = rho.dim();
  if (eta == 1.0) return rho;
  Matrix out = Matrix::Zero(dim, dim);
  Eigen::MatrixXd kraus(dim, dim);
  for (int k = 0; k < dim; ++k) {
    kraus.setZero();
    for (int n = k; n < dim; ++n) {
      const double log_binom =
          std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      const double amp = std::exp(0.5 * log_binom) * std::pow(eta, 0.5 * (n - k)) *
                         std::pow(1.0 - eta, 0.5 * k);
      kraus(n - k, n) = amp;
    }
    const Matrix kc = kraus.cast<Complex>();
    out.noalias() += kc * rho.matrix() * kc.adjoint();
  }
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out));
}

DensityMatrix mix(const DensityMatrix& rho_a, const DensityMatrix& rho_b, double w) {
  if (rho_a.dim() != rho_b.dim()) throw InvalidArgument("mix: dimension mismatch");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mix weight must lie in [0, 1]");
  return DensityMatrix(w * rho_a.matrix() + (1.0 - w) * rho_b.matrix());
}

namespace {

// A with rho = A A^dagger, from the eigenvalues above the noise floor. Dropping
// the floor keeps eigenvalue noise (~1e-16) out of the square roots.
Matrix psd_factor(const DensityMatrix& rho) {
  constexpr double kPsdTolerance = 1e-8;
  constexpr double kFloor = 1e-14;
  Matrix vecs;
  const Eigen::VectorXd vals = hermitian_eigen(0.5 * (rho.matrix() + rho.matrix().adjoint()), vecs);
  if (vals.minCoeff() < -kPsdTolerance) {
    throw InvalidArgument("fidelity: input is not positive semidefinite");
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals(k) > kFloor) kept.push_back(k);
  }
  Matrix factor(rho.dim(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    factor.col(static_cast<Eigen::Index>(c)) = vecs.col(kept[c]) * std::sqrt(vals(kept[c]));
  }
  return factor;
}

}  // namespace

double fidelity(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  if (rho_a.dim() != rho_b.dim()) throw InvalidArgument("fidelity: dimension mismatch");
  // Tr sqrt(sqrt(a) b sqrt(a)) is the trace norm of A^dagger B.
  const Matrix a = psd_factor(rho_a);
  const Matrix b = psd_factor(rho_b);
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  const Matrix overlap = a.adjoint() * b;
  Eigen::JacobiSVD<Matrix> svd(overlap);
  const double trace_norm = svd.singularValues().sum();
  return std::clamp(trace_norm * trace_norm, 0.0, 1.0);
}

// --- Operator matrices ------------------------------------------------------

Matrix annihilation_operator(int dim) {
  require_dim(dim);
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix quadrature_x(int dim) {
  const Matrix a = annihilation_operator(dim);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

Matrix quadrature_p(int dim) {
  const Matrix a = annihilation_operator(dim);
  return (a - a.adjoint()) / Complex(0.0, std::sqrt(2.0));
}

Matrix displacement_operator(Complex beta, int dim) {
  require_dim(dim);
  const int big = dim + kExpPadding;
  const Matrix a = annihilation_operator(big);
  const Matrix gen = beta * a.adjoint() - std::conj(beta) * a;
  const Matrix u = gen.exp();
  return u.topLeftCorner(dim, dim);
}

Matrix squeeze_operator(double s, int dim) {
  require_dim(dim);
  const int big = dim + kExpPadding;
  const Matrix a = annihilation_operator(big);
  const Matrix gen = 0.5 * s * (a * a - a.adjoint() * a.adjoint());
  const Matrix u = gen.exp();
  return u.topLeftCorner(dim, dim);
}

Matrix rotation_operator(double phi, int dim) {
  require_dim(dim);
  Vector diag(dim);
  for (int n = 0; n < dim; ++n) diag(n) = std::polar(1.0, phi * n);
  return diag.asDiagonal();
}

DensityMatrix apply_unitary(const Matrix& u, const DensityMatrix& rho) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw InvalidArgument("unitary and state dimensions differ");
  }
  Matrix out = u * rho.matrix() * u.adjoint();
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out));
}

DensityMatrix displace(const DensityMatrix& rho, Complex beta) {
  return apply_unitary(displacement_operator(beta, rho.dim()), rho);
}

DensityMatrix rotate(const DensityMatrix& rho, double phi) {
  return apply_unitary(rotation_operator(phi, rho.dim()), rho);
}

}  // namespace fockbench
