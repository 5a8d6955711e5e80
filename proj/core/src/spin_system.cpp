// Copyright 2026 The EQSim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqs/spin_system.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eqs {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

double SpinSystem::coupling_hz(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) throw std::out_of_range("coupling_hz: spin index out of range");
  return j_hz(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
}

std::size_t SpinSystem::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return k;
  }
  throw std::invalid_argument("unknown spin label '" + std::string(label) + "'");
}

void SpinSystem::validate() const {
  const std::size_t n = size();
  if (n == 0 || n > kMaxQubits) throw std::invalid_argument("spin system must have 1 to 8 spins");
  if (shifts_hz.size() != n || t2_s.size() != n) {
    throw std::invalid_argument("spin system: shifts_hz and t2_s must have one entry per spin");
  }
  if (j_hz.rows() != static_cast<Eigen::Index>(n) || j_hz.cols() != static_cast<Eigen::Index>(n)) {
    throw std::invalid_argument("spin system: J matrix has the wrong size");
  }
  if (!all_finite(shifts_hz) || !std::isfinite(reference_hz) || !j_hz.allFinite()) {
    throw std::invalid_argument("spin system: non-finite shift, reference or coupling");
  }
  if ((j_hz - j_hz.transpose()).cwiseAbs().maxCoeff() > 0.0 || j_hz.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("spin system: J matrix must be symmetric with zero diagonal");
  }
  for (double t2 : t2_s) {
    if (!(t2 > 0.0) || !std::isfinite(t2)) throw std::invalid_argument("spin system: T2 must be positive");
  }
}

SpinSystem SpinSystem::subsystem(std::span<const std::size_t> spins) const {
  SpinSystem out;
  out.reference_hz = reference_hz;
  out.note = note;
  const auto m = static_cast<Eigen::Index>(spins.size());
  out.j_hz = RMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t si = spins[static_cast<std::size_t>(i)];
    if (si >= size()) throw std::out_of_range("subsystem: spin index out of range");
    out.labels.push_back(labels[si]);
    out.shifts_hz.push_back(shifts_hz[si]);
    out.t2_s.push_back(t2_s[si]);
    for (Eigen::Index j = 0; j < m; ++j) {
      out.j_hz(i, j) = j_hz(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(spins[static_cast<std::size_t>(j)]));
    }
  }
  out.validate();
  return out;
}

SpinSystem parse_spin_system(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("molecule config: ") + e.what());
  }
  SpinSystem sys;
  try {
    sys.labels = doc.at("spins").get<std::vector<std::string>>();
    sys.shifts_hz = doc.at("shifts_hz").get<std::vector<double>>();
    sys.reference_hz = doc.at("reference_hz").get<double>();
    sys.t2_s = doc.at("t2_s").get<std::vector<double>>();
    sys.note = doc.value("note", std::string());
    const auto rows = doc.at("j_couplings_hz").get<std::vector<std::vector<double>>>();
    const auto n = static_cast<Eigen::Index>(sys.labels.size());
    if (static_cast<Eigen::Index>(rows.size()) != std::max<Eigen::Index>(n - 1, 0)) {
      throw std::invalid_argument("molecule config: j_couplings_hz must have n - 1 rows");
    }
    sys.j_hz = RMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (static_cast<Eigen::Index>(row.size()) != n - 1 - i) {
        throw std::invalid_argument("molecule config: j_couplings_hz row " + std::to_string(i) +
                                    " must have " + std::to_string(n - 1 - i) + " entries");
      }
      for (Eigen::Index j = i + 1; j < n; ++j) {
        sys.j_hz(i, j) = sys.j_hz(j, i) = row[static_cast<std::size_t>(j - i - 1)];
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("molecule config: ") + e.what());
  }
  sys.validate();
  return sys;
}

SpinSystem load_spin_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open molecule config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spin_system(buffer.str());
}

std::string to_json(const SpinSystem& sys) {
  nlohmann::json doc;
  if (!sys.note.empty()) doc["note"] = sys.note;
  doc["spins"] = sys.labels;
  doc["shifts_hz"] = sys.shifts_hz;
  doc["reference_hz"] = sys.reference_hz;
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i + 1 < sys.j_hz.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = i + 1; j < sys.j_hz.cols(); ++j) row.push_back(sys.j_hz(i, j));
    rows.push_back(std::move(row));
  }
  doc["j_couplings_hz"] = rows;
  doc["t2_s"] = sys.t2_s;
  return doc.dump(2);
}

SpinSystem synthetic_crotonic_acid() {
  SpinSystem sys;
  sys.note =
      "SYNTHETIC PARAMETERS. Illustrative values for a four-carbon crotonic-acid-like register; not "
      "measured constants of any sample. Replace with measured shifts, couplings and T2 values for "
      "quantitative work.";
  sys.labels = {"C1", "C2", "C3", "C4"};
  sys.shifts_hz = {17092.0, 12272.0, 14788.0, 1810.0};
  sys.reference_hz = 14838.0;
  sys.j_hz = RMatrix::Zero(4, 4);
  const double upper[4][4] = {{0, 72.4, 1.4, 7.0}, {0, 0, 69.7, 1.6}, {0, 0, 0, 41.6}, {0, 0, 0, 0}};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) sys.j_hz(i, j) = sys.j_hz(j, i) = upper[i][j];
  }
  sys.t2_s = {0.84, 0.85, 0.90, 0.92};
  sys.validate();
  return sys;
}

Eigen::VectorXd internal_energies(const SpinSystem& sys) {
  sys.validate();
  const std::size_t n = sys.size();
  const std::size_t d = std::size_t{1} << n;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    auto z = [&](std::size_t spin) { return ((i >> (n - 1 - spin)) & 1U) ? -1.0 : 1.0; };
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      value += kPi * sys.offset_hz(j) * z(j);
      for (std::size_t k = j + 1; k < n; ++k) value += 0.5 * kPi * sys.coupling_hz(j, k) * z(j) * z(k);
    }
    e(static_cast<Eigen::Index>(i)) = value;
  }
  return e;
}

HermitianOperator internal_hamiltonian(const SpinSystem& sys) {
  return HermitianOperator(internal_energies(sys).cast<Complex>().asDiagonal().toDenseMatrix());
}

}  // namespace eqs
