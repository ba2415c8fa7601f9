#include "dama/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dama/error.hpp"
#include "json.hpp"

namespace dama {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> names,
                                     std::vector<std::vector<double>> dist) {
  const std::size_t n = names.size();
  if (n == 0) throw InputError("points", "metric space needs at least one point");
  if (dist.size() != n) throw InputError("dist", "matrix must have one row per point");
  names_ = std::move(names);
  dist_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) throw InputError("dist/" + std::to_string(i), "row has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      const std::string at = "dist/" + std::to_string(i) + "/" + std::to_string(j);
      double v = dist[i][j];
      if (!std::isfinite(v)) throw InputError(at, "distance must be finite");
      if (i == j && v != 0.0) throw InputError(at, "diagonal must be zero");
      if (i != j && v <= 0.0) throw InputError(at, "distinct points need positive distance");
      dist_[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(i, j) != d(j, i))
        throw InputError("dist/" + std::to_string(i) + "/" + std::to_string(j), "matrix not symmetric");
    }
  }
  if (triangle_defect() > 1e-12 * std::max(1.0, diameter()))
    throw InputError("dist", "triangle inequality violated");
}

FiniteMetricSpace FiniteMetricSpace::trusted(std::vector<std::string> names, std::vector<double> flat) {
  FiniteMetricSpace s;
  s.names_ = std::move(names);
  s.dist_ = std::move(flat);
  return s;
}

double FiniteMetricSpace::diameter() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

double FiniteMetricSpace::diameter(const std::vector<std::size_t>& subset) const {
  double out = 0.0;
  for (std::size_t a : subset) {
    for (std::size_t b : subset) out = std::max(out, d(a, b));
  }
  return out;
}

double FiniteMetricSpace::set_distance(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) const {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t x : a) {
    for (std::size_t y : b) out = std::min(out, d(x, y));
  }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::scaled(double s) const {
  FiniteMetricSpace out = *this;
  for (double& v : out.dist_) v *= s;
  return out;
}

FiniteMetricSpace FiniteMetricSpace::restricted(const std::vector<std::size_t>& subset) const {
  std::vector<std::string> names;
  std::vector<double> flat;
  for (std::size_t a : subset) {
    names.push_back(names_[a]);
    for (std::size_t b : subset) flat.push_back(d(a, b));
  }
  return trusted(std::move(names), std::move(flat));
}

double FiniteMetricSpace::triangle_defect() const {
  const std::size_t n = size();
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) worst = std::max(worst, d(x, z) - d(x, y) - d(y, z));
    }
  }
  return worst;
}

FiniteMetricSpace parse_metric_space(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("dist") || !doc["dist"].is_array())
    throw InputError("dist", "missing distance matrix");
  const auto& jd = doc["dist"];
  std::vector<std::vector<double>> dist;
  for (std::size_t i = 0; i < jd.size(); ++i) {
    if (!jd[i].is_array()) throw InputError("dist/" + std::to_string(i), "expected an array");
    std::vector<double> row;
    for (std::size_t j = 0; j < jd[i].size(); ++j) {
      if (!jd[i][j].is_number())
        throw InputError("dist/" + std::to_string(i) + "/" + std::to_string(j), "expected a number");
      row.push_back(jd[i][j].get<double>());
    }
    dist.push_back(std::move(row));
  }
  std::vector<std::string> names;
  if (doc.contains("points")) {
    if (!doc["points"].is_array()) throw InputError("points", "expected an array");
    for (std::size_t i = 0; i < doc["points"].size(); ++i) {
      const auto& p = doc["points"][i];
      if (!p.is_string()) throw InputError("points/" + std::to_string(i), "expected a string");
      names.push_back(p.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < dist.size(); ++i) names.push_back("p" + std::to_string(i));
  }
  return FiniteMetricSpace(std::move(names), std::move(dist));
}

FiniteMetricSpace circle_net(std::size_t n) {
  if (n == 0) throw PreconditionError("circle net needs at least one point");
  std::vector<std::string> names;
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("c" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double gap = static_cast<double>(std::min((i + n - j) % n, (j + n - i) % n));
      flat[i * n + j] = std::sin(std::numbers::pi * gap / static_cast<double>(n));
    }
  }
  return FiniteMetricSpace::trusted(std::move(names), std::move(flat));
}

FiniteMetricSpace two_point(double d) {
  if (!(d > 0.0)) throw PreconditionError("distance must be positive");
  return FiniteMetricSpace::trusted({"x0", "x1"}, {0.0, d, d, 0.0});
}

std::vector<double> floyd_warshall(std::vector<double> w, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ik = w[i * n + k];
      if (std::isinf(ik)) continue;
      for (std::size_t j = 0; j < n; ++j) w[i * n + j] = std::min(w[i * n + j], ik + w[k * n + j]);
    }
  }
  return w;
}

}  // namespace dama
