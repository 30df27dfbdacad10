#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "qbm/checkpoint.hpp"

namespace qbm {

namespace {

constexpr int kFormatVersion = 1;

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

CheckpointStore::CheckpointStore(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // fresh store
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("checkpoint: cannot parse " + path_ + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "qbm-checkpoint" ||
      doc.value("version", 0) != kFormatVersion)
    throw std::runtime_error("checkpoint: " + path_ + " is not a version-" +
                             std::to_string(kFormatVersion) + " qbm checkpoint file");
  for (const auto& j : doc.at("entries")) {
    Entry e;
    e.key.dimension = j.at("dimension").get<int>();
    e.key.particles = j.at("particles").get<int>();
    e.key.lambda = j.at("lambda").get<double>();
    e.key.gamma = j.at("gamma").get<double>();
    e.key.basis = j.at("basis").get<std::string>();
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows) * cols != data.size())
      throw std::runtime_error("checkpoint: inconsistent matrix shape in " + path_);
    e.data.resize(rows, cols);
    for (int c = 0, k = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r, ++k) e.data(r, c) = data[k];
    entries_.push_back(std::move(e));
  }
}

std::optional<Eigen::MatrixXd> CheckpointStore::find(const CheckpointKey& key) const {
  for (const auto& e : entries_)
    if (e.key.same_basis(key) && close(e.key.lambda, key.lambda) && close(e.key.gamma, key.gamma))
      return e.data;
  return std::nullopt;
}

std::optional<Eigen::MatrixXd> CheckpointStore::find_nearest(const CheckpointKey& key) const {
  const Entry* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) {
    if (!e.key.same_basis(key)) continue;
    // log distance in lambda (decades apart are genuinely far), linear in gamma
    const double dl = std::log1p(e.key.lambda) - std::log1p(key.lambda);
    const double dg = e.key.gamma - key.gamma;
    const double d = dl * dl + dg * dg;
    if (d < best_d) {
      best_d = d;
      best = &e;
    }
  }
  if (!best) return std::nullopt;
  return best->data;
}

std::vector<CheckpointKey> CheckpointStore::keys() const {
  std::vector<CheckpointKey> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.key);
  return out;
}

void CheckpointStore::put(const CheckpointKey& key, const Eigen::MatrixXd& data) {
  for (auto& e : entries_)
    if (e.key.same_basis(key) && close(e.key.lambda, key.lambda) && close(e.key.gamma, key.gamma)) {
      e.data = data;
      return;
    }
  entries_.push_back({key, data});
}

void CheckpointStore::save() const {
  nlohmann::json doc;
  doc["format"] = "qbm-checkpoint";
  doc["version"] = kFormatVersion;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j;
    j["dimension"] = e.key.dimension;
    j["particles"] = e.key.particles;
    j["lambda"] = e.key.lambda;
    j["gamma"] = e.key.gamma;
    j["basis"] = e.key.basis;
    j["rows"] = static_cast<int>(e.data.rows());
    j["cols"] = static_cast<int>(e.data.cols());
    std::vector<double> flat;
    flat.reserve(e.data.size());
    for (int c = 0; c < e.data.cols(); ++c)
      for (int r = 0; r < e.data.rows(); ++r) flat.push_back(e.data(r, c));
    j["data"] = std::move(flat);
    list.push_back(std::move(j));
  }
  doc["entries"] = std::move(list);

  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("checkpoint: cannot write " + tmp);
    out << doc.dump();
  }
  if (std::rename(tmp.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("checkpoint: cannot replace " + path_);
}

}  // namespace qbm
