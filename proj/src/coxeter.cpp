#include "dama/coxeter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include "json.hpp"

#include "dama/error.hpp"

namespace dama {

namespace {

inline GenSet bit(std::size_t i) { return GenSet{1} << i; }

std::vector<std::size_t> indices(GenSet t) {
  std::vector<std::size_t> out;
  while (t != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(t)));
    t &= t - 1;
  }
  return out;
}

}  // namespace

CoxeterSystem::CoxeterSystem(std::vector<std::string> generators,
                             std::vector<std::vector<int>> m)
    : gens_(std::move(generators)), m_(std::move(m)) {
  const std::size_t n = gens_.size();
  if (n == 0) throw InputError("generators", "at least one generator required");
  if (n > 64) throw InputError("generators", "more than 64 generators");
  std::vector<std::string> sorted = gens_;
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
    throw InputError("generators", "duplicate generator '" + *it + "'");
  if (m_.size() != n) throw InputError("m", "matrix must have one row per generator");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = "m/" + std::to_string(i);
    if (m_[i].size() != n) throw InputError(row, "row length differs from generator count");
    for (std::size_t j = 0; j < n; ++j) {
      const std::string at = row + "/" + std::to_string(j);
      int v = m_[i][j];
      if (i == j && v != 1) throw InputError(at, "diagonal entry must be 1");
      if (i != j && v < 2) throw InputError(at, "off-diagonal entry must be >= 2 or inf");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m_[i][j] != m_[j][i])
        throw InputError("m/" + std::to_string(i) + "/" + std::to_string(j), "matrix not symmetric");
    }
  }
}

GenSet CoxeterSystem::all() const { return size() == 64 ? ~GenSet{0} : bit(size()) - 1; }

GenSet CoxeterSystem::mask_of(const std::vector<std::string>& names) const {
  GenSet t = 0;
  for (const auto& n : names) {
    auto it = std::find(gens_.begin(), gens_.end(), n);
    if (it == gens_.end()) throw InputError(n, "unknown generator '" + n + "'");
    t |= bit(static_cast<std::size_t>(it - gens_.begin()));
  }
  return t;
}

std::vector<std::string> CoxeterSystem::names_of(GenSet t) const {
  std::vector<std::string> out;
  for (std::size_t i : indices(t)) out.push_back(gens_[i]);
  return out;
}

CoxeterSystem parse_coxeter(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object()) throw InputError("", "expected an object");
  if (!doc.contains("generators") || !doc["generators"].is_array())
    throw InputError("generators", "missing generator list");
  if (!doc.contains("m") || !doc["m"].is_array()) throw InputError("m", "missing matrix");
  std::vector<std::string> gens;
  for (std::size_t i = 0; i < doc["generators"].size(); ++i) {
    const auto& g = doc["generators"][i];
    if (!g.is_string()) throw InputError("generators/" + std::to_string(i), "expected a string");
    gens.push_back(g.get<std::string>());
  }
  std::vector<std::vector<int>> m;
  for (std::size_t i = 0; i < doc["m"].size(); ++i) {
    const auto& row = doc["m"][i];
    if (!row.is_array()) throw InputError("m/" + std::to_string(i), "expected an array");
    std::vector<int> r;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& v = row[j];
      const std::string at = "m/" + std::to_string(i) + "/" + std::to_string(j);
      if (v.is_string() && v.get<std::string>() == "inf") {
        r.push_back(kInf);
      } else if (v.is_number_integer() && v.get<long long>() >= 0 && v.get<long long>() < kInf) {
        r.push_back(static_cast<int>(v.get<long long>()));
      } else {
        throw InputError(at, "expected a positive integer or \"inf\"");
      }
    }
    m.push_back(std::move(r));
  }
  return CoxeterSystem(std::move(gens), std::move(m));
}

namespace {

// One connected component of the Coxeter diagram (edges where m >= 3).
bool component_is_finite(const CoxeterSystem& c, const std::vector<std::size_t>& comp) {
  const std::size_t n = comp.size();
  if (n == 1) return true;
  struct Edge {
    std::size_t u, v;
    int m;
  };
  std::vector<Edge> edges;
  std::vector<int> degree(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      int m = c.m(comp[a], comp[b]);
      if (m == kInf) return false;
      if (m >= 3) {
        edges.push_back({a, b, m});
        ++degree[a];
        ++degree[b];
      }
    }
  }
  if (n == 2) return true;  // I2(m)
  if (edges.size() != n - 1) return false;  // contains a cycle
  int heavy = 0;
  int heaviest = 3;
  for (const Edge& e : edges) {
    if (e.m >= 4) ++heavy;
    heaviest = std::max(heaviest, e.m);
  }
  if (heaviest >= 6 || heavy > 1) return false;
  const int max_degree = *std::max_element(degree.begin(), degree.end());
  if (max_degree > 3) return false;

  if (max_degree == 3) {
    if (heavy > 0) return false;
    if (std::count(degree.begin(), degree.end(), 3) > 1) return false;
    std::size_t centre = static_cast<std::size_t>(
        std::find(degree.begin(), degree.end(), 3) - degree.begin());
    // Walk each arm out from the branch vertex.
    std::vector<int> arms;
    for (const Edge& start : edges) {
      if (start.u != centre && start.v != centre) continue;
      std::size_t prev = centre;
      std::size_t cur = start.u == centre ? start.v : start.u;
      int len = 1;
      while (degree[cur] == 2) {
        for (const Edge& e : edges) {
          std::size_t other = e.u == cur ? e.v : (e.v == cur ? e.u : n);
          if (other != n && other != prev) {
            prev = cur;
            cur = other;
            break;
          }
        }
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] != 1) return false;
    if (arms[1] == 1) return true;                   // D_n
    return arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4;  // E6, E7, E8
  }

  if (heavy == 0) return true;  // A_n
  // A path: order its vertices and locate the heavy edge.
  std::size_t end = static_cast<std::size_t>(std::find(degree.begin(), degree.end(), 1) -
                                             degree.begin());
  std::vector<std::size_t> order{end};
  std::vector<int> labels;
  while (order.size() < n) {
    std::size_t cur = order.back();
    std::size_t prev = order.size() > 1 ? order[order.size() - 2] : n;
    for (const Edge& e : edges) {
      std::size_t other = e.u == cur ? e.v : (e.v == cur ? e.u : n);
      if (other != n && other != prev) {
        order.push_back(other);
        labels.push_back(e.m);
        break;
      }
    }
  }
  std::size_t pos = static_cast<std::size_t>(
      std::find_if(labels.begin(), labels.end(), [](int m) { return m >= 4; }) - labels.begin());
  const bool at_end = pos == 0 || pos == labels.size() - 1;
  const int m = labels[pos];
  if (m == 4) return at_end || (n == 4 && pos == 1);  // B_n or F4
  return m == 5 && at_end && n <= 4;                  // H3, H4
}

}  // namespace

bool is_finite_type(const CoxeterSystem& c, GenSet t) {
  t &= c.all();
  GenSet left = t;
  while (left != 0) {
    std::vector<std::size_t> comp;
    GenSet seen = left & (~left + 1);
    std::vector<std::size_t> stack{static_cast<std::size_t>(std::countr_zero(seen))};
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t w : indices(t & ~seen)) {
        if (c.m(v, w) >= 3) {
          seen |= bit(w);
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    if (!component_is_finite(c, comp)) return false;
    left &= ~seen;
  }
  return true;
}

bool gram_pd_test(const CoxeterSystem& c, GenSet t, double tol) {
  std::vector<std::size_t> idx = indices(t & c.all());
  const auto n = static_cast<Eigen::Index>(idx.size());
  if (n == 0) return true;
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      int m = c.m(idx[i], idx[j]);
      b(i, j) = m == kInf ? -1.0 : -std::cos(std::numbers::pi / m);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > tol;
}

SimplicialComplex nerve(const CoxeterSystem& c, std::size_t cap) {
  const std::size_t n = c.size();
  if (n > cap || n > 30) throw PreconditionError("nerve limited to " + std::to_string(cap) + " generators");
  const GenSet top = c.all();
  std::vector<bool> finite(std::size_t{1} << n, false);
  finite[0] = true;
  for (GenSet t = 1; t <= top; ++t) {
    // Finite type is closed under subsets: only test t when every
    // one-smaller subset passed.
    bool parents_ok = true;
    for (std::size_t i : indices(t)) {
      if (!finite[t & ~bit(i)]) {
        parents_ok = false;
        break;
      }
    }
    finite[t] = parents_ok && is_finite_type(c, t);
  }
  std::vector<std::string> names = c.generators();
  std::vector<std::vector<std::string>> faces;
  for (GenSet t = 1; t <= top; ++t) {
    if (!finite[t]) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < n && maximal; ++i) {
      if (!(t & bit(i)) && finite[t | bit(i)]) maximal = false;
    }
    if (maximal) faces.push_back(c.names_of(t));
  }
  return SimplicialComplex(std::move(names), faces);
}

std::string to_string(Ends e) {
  switch (e) {
    case Ends::Finite:
      return "finite";
    case Ends::TwoEnded:
      return "two_ended";
    case Ends::OneEnded:
      return "one_ended";
    case Ends::InfinitelyMany:
      return "infinitely_many_ends";
  }
  return {};
}

namespace {

bool is_product_with_dinfty(const CoxeterSystem& c) {
  const std::size_t n = c.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (c.m(s, t) != kInf) continue;
      const GenSet rest = c.all() & ~bit(s) & ~bit(t);
      bool commuting = true;
      for (std::size_t u : indices(rest)) {
        if (c.m(s, u) != 2 || c.m(t, u) != 2) {
          commuting = false;
          break;
        }
      }
      if (commuting && is_finite_type(c, rest)) return true;
    }
  }
  return false;
}

}  // namespace

EndednessClass classify_endedness(const CoxeterSystem& c, std::size_t cap) {
  if (is_finite_type(c, c.all())) return {Ends::Finite, false};
  if (is_product_with_dinfty(c)) return {Ends::TwoEnded, false};
  SimplicialComplex l = nerve(c, cap);
  if (is_irreducible(l) && !l.is_simplex(l.all())) return {Ends::OneEnded, false};
  return {Ends::InfinitelyMany, is_infinity_large(l)};
}

std::string boundary_atom_name(const CoxeterSystem& c, GenSet t) {
  std::string out = "dW{";
  bool first = true;
  for (const auto& n : c.names_of(t)) {
    if (!first) out += ",";
    out += n;
    first = false;
  }
  return out + "}";
}

BoundaryExpr boundary_expression(const CoxeterSystem& c, std::size_t cap) {
  const EndednessClass cls = classify_endedness(c, cap);
  switch (cls.tag) {
    case Ends::Finite:
      return BoundaryExpr::empty();
    case Ends::TwoEnded:
      return BoundaryExpr::point_pair();
    case Ends::OneEnded:
      return BoundaryExpr::atom(boundary_atom_name(c, c.all()));
    case Ends::InfinitelyMany:
      break;
  }
  SimplicialComplex l = nerve(c, cap);
  std::vector<BoundaryExpr> parts;
  for (VertexSet f : terminal_factors(l)) {
    if (l.is_simplex(f)) {
      parts.push_back(BoundaryExpr::empty());
    } else {
      parts.push_back(BoundaryExpr::atom(boundary_atom_name(c, c.mask_of(l.names_of(f)))));
    }
  }
  return normalize(BoundaryExpr::amalgam(std::move(parts)));
}

}  // namespace dama
