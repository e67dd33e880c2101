#include <cmath>

#include "fockbench/errors.hpp"
#include "fockbench/tomography.hpp"

namespace fockbench {

namespace {

constexpr int kMaxDilutionHalvings = 40;
constexpr double kZeroProbability = 1e-300;

// Non-empty (phase bin, x bin) cells. Column k of `vectors` is the quadrature
// eigenvector at the cell centre, so the cell projector is width * v v^dagger.
struct BinnedData {
  Matrix vectors;
  Eigen::VectorXd freq;  // relative frequencies, summing to 1
  double width = 0.0;
  int n_bins = 1;
  std::size_t dropped = 0;
};

BinnedData bin_data(const QuadratureDataset& data, const TomoConfig& config) {
  data.validate();
  if (data.samples.empty()) throw InvalidArgument("maxlik: empty dataset");
  config.validate();

  const double width = (config.x_max - config.x_min) / config.n_points;
  std::vector<std::size_t> counts(static_cast<std::size_t>(data.n_bins) * config.n_points, 0);
  std::size_t kept = 0;
  std::size_t dropped = 0;
  for (const auto& s : data.samples) {
    if (s.x < config.x_min || s.x >= config.x_max) {
      ++dropped;
      continue;
    }
    const int j = std::min(config.n_points - 1, static_cast<int>((s.x - config.x_min) / width));
    ++counts[static_cast<std::size_t>(s.bin) * config.n_points + j];
    ++kept;
  }
  if (kept == 0) throw InvalidArgument("maxlik: every sample lies outside the quadrature grid");

  std::size_t cells = 0;
  for (auto c : counts) cells += c > 0 ? 1 : 0;
  BinnedData out;
  out.vectors.resize(config.dim, static_cast<Eigen::Index>(cells));
  out.freq.resize(static_cast<Eigen::Index>(cells));
  out.width = width;
  out.n_bins = data.n_bins;
  out.dropped = dropped;
  Eigen::Index k = 0;
  for (int b = 0; b < data.n_bins; ++b) {
    const double theta = data.phases[static_cast<std::size_t>(b)];
    for (int j = 0; j < config.n_points; ++j) {
      const std::size_t c = counts[static_cast<std::size_t>(b) * config.n_points + j];
      if (c == 0) continue;
      const Eigen::VectorXd psi = hermite_functions(config.dim, config.x_min + (j + 0.5) * width);
      for (int n = 0; n < config.dim; ++n) out.vectors(n, k) = std::polar(psi(n), n * theta);
      out.freq(k) = static_cast<double>(c) / static_cast<double>(kept);
      ++k;
    }
  }
  return out;
}

// Probability of each cell: phase chosen with 1/n_bins, then x in the cell.
Eigen::VectorXd cell_probabilities(const BinnedData& bd, const Matrix& rho) {
  const Matrix rv = rho * bd.vectors;
  return (bd.vectors.conjugate().cwiseProduct(rv)).colwise().sum().real().transpose() *
         (bd.width / bd.n_bins);
}

double log_likelihood(const BinnedData& bd, const Eigen::VectorXd& probs) {
  double ll = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    if (!(probs(k) > kZeroProbability)) {
      throw NumericalError("maxlik: ill-conditioned data, a populated cell has zero probability");
    }
    ll += bd.freq(k) * std::log(probs(k));
  }
  return ll;
}

Matrix sandwich(const Matrix& m, const Matrix& rho) {
  Matrix out = m * rho * m.adjoint();
  out = 0.5 * (out + out.adjoint());
  return out / out.trace().real();
}

}  // namespace

void TomoConfig::validate() const {
  if (dim < 2) throw InvalidArgument("tomography dim must be >= 2");
  if (n_points < 100) throw InvalidArgument("tomography grid needs at least 100 points");
  if (!(x_max > x_min)) throw InvalidArgument("tomography grid needs x_max > x_min");
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(log_lik_tol >= 0.0)) throw InvalidArgument("log_lik_tol must be >= 0");
}

double binned_log_likelihood(const QuadratureDataset& data, const TomoConfig& config,
                             const DensityMatrix& rho) {
  if (rho.dim() != config.dim) throw InvalidArgument("state cutoff differs from config.dim");
  const BinnedData bd = bin_data(data, config);
  return log_likelihood(bd, cell_probabilities(bd, rho.matrix()));
}

MaxLikResult maxlik_reconstruct(const QuadratureDataset& data, const TomoConfig& config) {
  const BinnedData bd = bin_data(data, config);
  const int dim = config.dim;
  const Matrix identity = Matrix::Identity(dim, dim);

  Matrix rho = identity / static_cast<double>(dim);
  Eigen::VectorXd probs = cell_probabilities(bd, rho);
  double ll = log_likelihood(bd, probs);

  MaxLikResult result{DensityMatrix(rho), {ll}, 0, false, bd.dropped};
  for (int it = 0; it < config.max_iters; ++it) {
    // R = sum_k f_k / p_k * Pi_k, scaled so that R = 1 at the fixed point.
    const Eigen::VectorXd weights = bd.freq.cwiseQuotient(probs) * (bd.width / bd.n_bins);
    const Matrix r_op = bd.vectors * weights.cast<Complex>().asDiagonal() * bd.vectors.adjoint();

    Matrix next = sandwich(r_op, rho);
    Eigen::VectorXd next_probs = cell_probabilities(bd, next);
    double next_ll = log_likelihood(bd, next_probs);
    double eps = 1.0;
    int halvings = 0;
    while (next_ll < ll && halvings < kMaxDilutionHalvings) {
      next = sandwich(identity + eps * r_op, rho);
      next_probs = cell_probabilities(bd, next);
      next_ll = log_likelihood(bd, next_probs);
      eps *= 0.5;
      ++halvings;
    }
    if (next_ll < ll) {
      // No step improves the likelihood at double precision.
      result.converged = true;
      break;
    }
    const double gain = next_ll - ll;
    rho = std::move(next);
    probs = std::move(next_probs);
    ll = next_ll;
    result.log_likelihood.push_back(ll);
    result.iterations = it + 1;
    if (gain < config.log_lik_tol) {
      result.converged = true;
      break;
    }
  }
  result.rho = DensityMatrix(rho);
  return result;
}

}  // namespace fockbench
