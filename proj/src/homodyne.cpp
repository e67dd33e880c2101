#include <algorithm>
#include <cmath>
#include <numbers>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <atomic>
#include <random>
#include <thread>

#include "fockbench/errors.hpp"
#include "fockbench/tomography.hpp"

namespace fockbench {

namespace {

constexpr int kTablePoints = 8001;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vector quadrature_eigenvector(int dim, double theta, double x) {
  const Eigen::VectorXd psi = hermite_functions(dim, x);
  Vector v(dim);
  for (int n = 0; n < dim; ++n) v(n) = std::polar(psi(n), n * theta);
  return v;
}

// Cumulative distribution of x_theta on a fixed table.
struct QuadratureTable {
  double lo = 0.0;
  double step = 0.0;
  std::vector<double> cdf;

  double invert(double u) const {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return lo;
    if (it == cdf.end()) return lo + step * static_cast<double>(cdf.size() - 1);
    const auto k = static_cast<std::size_t>(it - cdf.begin());
    const double c0 = cdf[k - 1];
    const double c1 = cdf[k];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return lo + step * (static_cast<double>(k - 1) + t);
  }
};

QuadratureTable tabulate(const DensityMatrix& rho, double theta) {
  const int dim = rho.dim();
  // Beyond the classical turning point sqrt(2n + 1) of the top level the
  // density decays like a Gaussian; 8 more units leave nothing measurable.
  const double half_width = std::sqrt(2.0 * dim + 1.0) + 8.0;
  QuadratureTable t;
  t.lo = -half_width;
  t.step = 2.0 * half_width / (kTablePoints - 1);
  t.cdf.resize(kTablePoints);
  double prev = 0.0;
  double acc = 0.0;
  for (int k = 0; k < kTablePoints; ++k) {
    const double x = t.lo + k * t.step;
    const Vector v = quadrature_eigenvector(dim, theta, x);
    const double pdf = std::max((v.adjoint() * rho.matrix() * v)(0).real(), 0.0);
    if (k > 0) acc += 0.5 * (prev + pdf) * t.step;
    t.cdf[k] = acc;
    prev = pdf;
  }
  if (!(acc > 0.0)) throw NumericalError("homodyne distribution has no weight");
  for (double& c : t.cdf) c /= acc;
  return t;
}

}  // namespace

Eigen::VectorXd hermite_functions(int dim, double x) {
  Eigen::VectorXd psi(dim);
  psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (dim > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int n = 1; n + 1 < dim; ++n) {
    psi(n + 1) = std::sqrt(2.0 / (n + 1)) * x * psi(n) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1);
  }
  return psi;
}

double homodyne_pdf(const DensityMatrix& rho, double theta, double x) {
  const Vector v = quadrature_eigenvector(rho.dim(), theta, x);
  const double p = (v.adjoint() * rho.matrix() * v)(0).real();
  return std::max(p, 0.0);
}

std::vector<double> QuadratureDataset::uniform_phases(int n_bins) {
  if (n_bins < 1) throw InvalidArgument("need at least one phase bin");
  std::vector<double> phases(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) phases[b] = b * std::numbers::pi / n_bins;
  return phases;
}

void QuadratureDataset::validate() const {
  if (n_bins < 1 || phases.size() != static_cast<std::size_t>(n_bins)) {
    throw InvalidArgument("dataset: phase list does not match the bin count");
  }
  for (std::size_t b = 1; b < phases.size(); ++b) {
    if (!(phases[b] > phases[b - 1])) throw InvalidArgument("dataset: phases must increase strictly");
  }
  for (const auto& s : samples) {
    if (s.bin < 0 || s.bin >= n_bins) throw InvalidArgument("dataset: sample bin out of range");
    if (!std::isfinite(s.x)) throw InvalidArgument("dataset: non-finite quadrature value");
  }
}

QuadratureDataset sample_quadratures(const DensityMatrix& rho, std::size_t n_samples, int n_bins,
                                     std::uint64_t seed, int jobs) {
  if (n_samples < 1) throw InvalidArgument("need at least one sample");
  QuadratureDataset data;
  data.n_bins = n_bins;
  data.phases = QuadratureDataset::uniform_phases(n_bins);

  std::vector<QuadratureTable> tables;
  tables.reserve(static_cast<std::size_t>(n_bins));
  for (double theta : data.phases) tables.push_back(tabulate(rho, theta));

  data.samples.resize(n_samples);
  const std::size_t n_chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  auto fill_chunk = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    const std::size_t end = std::min(n_samples, (c + 1) * kSampleChunk);
    for (std::size_t i = c * kSampleChunk; i < end; ++i) {
      const int bin = std::min(n_bins - 1, static_cast<int>(uniform01(rng) * n_bins));
      data.samples[i] = {bin, tables[static_cast<std::size_t>(bin)].invert(uniform01(rng))};
    }
  };

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (jobs == 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fill_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) fill_chunk(c);
      });
    }
  }
  return data;
}

void write_dataset_csv(const QuadratureDataset& data, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "bin,phase_rad,x\n";
  for (const auto& s : data.samples) {
    out << s.bin << ',' << data.phases[static_cast<std::size_t>(s.bin)] << ',' << s.x << '\n';
  }
  out.precision(old_precision);
}

QuadratureDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("dataset: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "bin,phase_rad,x") throw FormatError("dataset: expected header 'bin,phase_rad,x'");

  QuadratureDataset data;
  std::vector<double> phase_of_bin;
  std::vector<bool> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string bin_s, phase_s, x_s;
    if (!std::getline(fields, bin_s, ',') || !std::getline(fields, phase_s, ',') ||
        !std::getline(fields, x_s)) {
      throw FormatError("dataset: malformed line " + std::to_string(line_no));
    }
    int bin = 0;
    double phase = 0.0;
    double x = 0.0;
    try {
      std::size_t used = 0;
      bin = std::stoi(bin_s, &used);
      if (used != bin_s.size()) throw std::invalid_argument("trailing");
      phase = std::stod(phase_s);
      x = std::stod(x_s);
    } catch (const std::exception&) {
      throw FormatError("dataset: unparsable number on line " + std::to_string(line_no));
    }
    if (bin < 0) throw FormatError("dataset: negative bin on line " + std::to_string(line_no));
    if (static_cast<std::size_t>(bin) >= phase_of_bin.size()) {
      phase_of_bin.resize(static_cast<std::size_t>(bin) + 1, 0.0);
      seen.resize(static_cast<std::size_t>(bin) + 1, false);
    }
    if (!seen[bin]) {
      phase_of_bin[bin] = phase;
      seen[bin] = true;
    } else if (phase_of_bin[bin] != phase) {
      throw FormatError("dataset: bin " + std::to_string(bin) + " has inconsistent phases");
    }
    data.samples.push_back({bin, x});
  }
  if (data.samples.empty()) throw InvalidArgument("dataset: no samples");

  data.n_bins = static_cast<int>(phase_of_bin.size());
  data.phases = QuadratureDataset::uniform_phases(data.n_bins);
  // Bins that received no sample keep the uniform phase.
  for (std::size_t b = 0; b < seen.size(); ++b) {
    if (seen[b]) data.phases[b] = phase_of_bin[b];
  }
  data.validate();
  return data;
}

}  // namespace fockbench
