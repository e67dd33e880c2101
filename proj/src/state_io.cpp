#include "fockbench/state_io.hpp"

#include <fstream>
#include <sstream>

#include "fockbench/errors.hpp"

namespace fockbench {

nlohmann::json state_to_json(const DensityMatrix& rho) {
  const int dim = rho.dim();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int m = 0; m < dim; ++m) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (int n = 0; n < dim; ++n) {
      row_re.push_back(rho(m, n).real());
      row_im.push_back(rho(m, n).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  nlohmann::json doc;
  doc["version"] = kStateFormatVersion;
  doc["dim"] = dim;
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc;
}

DensityMatrix state_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FormatError("state file: top level must be an object");
  if (!doc.contains("version") || doc["version"] != kStateFormatVersion) {
    throw FormatError(std::string("state file: expected version ") + kStateFormatVersion);
  }
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw FormatError("state file: missing integer 'dim'");
  }
  const int dim = doc["dim"].get<int>();
  if (dim < 1) throw FormatError("state file: 'dim' must be positive");
  const auto& re = doc.value("re", nlohmann::json());
  const auto& im = doc.value("im", nlohmann::json());
  auto check_shape = [dim](const nlohmann::json& rows, const char* name) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
      throw FormatError(std::string("state file: '") + name + "' must have dim rows");
    }
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw FormatError(std::string("state file: '") + name + "' rows must have dim entries");
      }
      for (const auto& v : row) {
        if (!v.is_number()) throw FormatError(std::string("state file: non-numeric entry in '") + name + "'");
      }
    }
  };
  check_shape(re, "re");
  check_shape(im, "im");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(re[i][j].get<double>(), im[i][j].get<double>());
  }
  return DensityMatrix(std::move(m));
}

std::string dump_state(const DensityMatrix& rho) { return state_to_json(rho).dump() + "\n"; }

void save_state(const DensityMatrix& rho, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << dump_state(rho);
}

DensityMatrix load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("state file " + path.string() + ": " + e.what());
  }
  return state_from_json(doc);
}

}  // namespace fockbench
