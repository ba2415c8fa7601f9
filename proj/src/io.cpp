#include "dama/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dama {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "malformed JSON");
  }
}

const json& member(const json& doc, const char* key, const std::string& at = "") {
  if (!doc.is_object() || !doc.contains(key)) throw InputError(at + key, std::string("missing '") + key + "'");
  return doc[key];
}

std::vector<std::string> string_list(const json& v, const std::string& at) {
  if (!v.is_array()) throw InputError(at, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw InputError(at + "/" + std::to_string(i), "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot read file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path, "cannot write file");
  out << text;
}

SimplicialComplex parse_simplicial_complex(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw InputError("", "expected an object");
  auto vertices = string_list(member(doc, "vertices"), "vertices");
  const json& faces = member(doc, "faces");
  if (!faces.is_array()) throw InputError("faces", "expected an array");
  std::vector<std::vector<std::string>> fs;
  for (std::size_t i = 0; i < faces.size(); ++i) fs.push_back(string_list(faces[i], "faces/" + std::to_string(i)));
  return SimplicialComplex(std::move(vertices), fs);
}

std::string metric_csv(const FiniteMetricSpace& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s.name(i);
  out += '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) out += (j ? "," : "") + fmt17(s.d(i, j));
    out += '\n';
  }
  return out;
}

FiniteMetricSpace parse_metric_csv(std::string_view text) {
  std::vector<std::string> lines;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (!l.empty()) lines.push_back(std::move(l));
  }
  if (lines.empty()) throw InputError("line 1", "missing header row");
  auto names = split(lines[0], ',');
  if (lines.size() != names.size() + 1) {
    throw InputError("line " + std::to_string(lines.size()), "expected one row per point");
  }
  std::vector<std::vector<double>> dist;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    const std::string at = "line " + std::to_string(i + 1);
    if (cells.size() != names.size()) throw InputError(at, "row length differs from header");
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) throw InputError(at, "not a number: '" + c + "'");
      row.push_back(v);
    }
    dist.push_back(std::move(row));
  }
  return FiniteMetricSpace(std::move(names), std::move(dist));
}

void write_bundle(const RegularStructure& s, const std::string& json_path) {
  s.validate();
  namespace fs = std::filesystem;
  const fs::path sidecar(json_path);
  fs::path csv = sidecar;
  csv.replace_extension(".csv");
  write_file(csv.string(), metric_csv(s.space));
  json doc;
  doc["distances"] = csv.filename().string();
  json subsets = json::array();
  for (const auto& z : s.subsets) {
    json names = json::array();
    for (std::size_t p : z) names.push_back(s.space.name(p));
    subsets.push_back(std::move(names));
  }
  doc["subsets"] = std::move(subsets);
  doc["classes"] = s.classes;
  write_file(json_path, doc.dump(2) + "\n");
}

RegularStructure read_bundle(const std::string& json_path) {
  namespace fs = std::filesystem;
  const json doc = parse_json(read_file(json_path));
  if (!doc.is_object()) throw InputError(json_path, "expected an object");
  const json& dist = member(doc, "distances");
  if (!dist.is_string()) throw InputError("distances", "expected a file name");
  const fs::path csv = fs::path(json_path).parent_path() / dist.get<std::string>();
  RegularStructure s;
  s.space = parse_metric_csv(read_file(csv.string()));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < s.space.size(); ++i) {
    if (!index.emplace(s.space.name(i), i).second) throw InputError(csv.string(), "duplicate point name");
  }
  const json& subsets = member(doc, "subsets");
  if (!subsets.is_array()) throw InputError("subsets", "expected an array");
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const std::string at = "subsets/" + std::to_string(i);
    std::vector<std::size_t> z;
    for (const auto& name : string_list(subsets[i], at)) {
      auto it = index.find(name);
      if (it == index.end()) throw InputError(at, "unknown point '" + name + "'");
      z.push_back(it->second);
    }
    std::sort(z.begin(), z.end());
    s.subsets.push_back(std::move(z));
  }
  const json& classes = member(doc, "classes");
  if (!classes.is_array()) throw InputError("classes", "expected an array");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!classes[i].is_number_integer()) throw InputError("classes/" + std::to_string(i), "expected an integer");
    s.classes.push_back(classes[i].get<int>());
  }
  s.validate();
  return s;
}

std::string labelling_json(const TLabelling& l) {
  json doc;
  doc["eps"] = l.eps;
  json nodes = json::array();
  for (const auto& n : l.nodes) {
    nodes.push_back({{"parent", n.parent},
                     {"depth", n.depth},
                     {"subset", n.subset},
                     {"children", n.children},
                     {"region", n.region},
                     {"radius", n.radius},
                     {"containment", n.containment},
                     {"leftover", n.leftover}});
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

TLabelling parse_labelling(std::string_view json_text) {
  const json doc = parse_json(json_text);
  TLabelling l;
  try {
    l.eps = member(doc, "eps").get<double>();
    const json& nodes = member(doc, "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string at = "nodes/" + std::to_string(i) + "/";
      const json& n = nodes[i];
      TLabelling::Node node;
      node.parent = member(n, "parent", at).get<int>();
      node.depth = member(n, "depth", at).get<int>();
      node.subset = member(n, "subset", at).get<std::size_t>();
      node.children = member(n, "children", at).get<std::vector<int>>();
      node.region = member(n, "region", at).get<std::vector<std::size_t>>();
      if (n.contains("radius")) node.radius = n["radius"].get<double>();
      if (n.contains("containment") && !n["containment"].is_null()) node.containment = n["containment"].get<double>();
      if (n.contains("leftover")) node.leftover = n["leftover"].get<std::size_t>();
      l.nodes.push_back(std::move(node));
    }
  } catch (const json::type_error& e) {
    throw InputError("nodes", std::string("wrong value type: ") + e.what());
  }
  for (std::size_t i = 0; i < l.nodes.size(); ++i) {
    const auto& n = l.nodes[i];
    const int size = static_cast<int>(l.nodes.size());
    if ((i == 0) != (n.parent < 0) || n.parent >= size) {
      throw InputError("nodes/" + std::to_string(i) + "/parent", "bad parent");
    }
    for (int c : n.children) {
      if (c <= 0 || c >= size || l.nodes[c].parent != static_cast<int>(i)) {
        throw InputError("nodes/" + std::to_string(i) + "/children", "child does not point back");
      }
    }
  }
  return l;
}

std::string complex_dot(const SimplicialComplex& c) {
  std::string out = "graph complex {\n";
  for (const auto& v : c.vertices()) out += "  " + dot_id(v) + ";\n";
  for (std::size_t u = 0; u < c.size(); ++u) {
    for (std::size_t v = u + 1; v < c.size(); ++v) {
      if (c.has_edge(static_cast<int>(u), static_cast<int>(v))) {
        out += "  " + dot_id(c.vertices()[u]) + " -- " + dot_id(c.vertices()[v]) + ";\n";
      }
    }
  }
  return out + "}\n";
}

std::string ball_dot(const BassSerreBall& b, const GraphOfGroups& g) {
  std::string out = "graph ball {\n";
  for (std::size_t i = 0; i < b.nodes.size(); ++i) {
    const auto& n = b.nodes[i];
    out += "  n" + std::to_string(i) + " [label=" + dot_id(g.vertices()[n.label].name) +
           (n.unexplored ? ", style=dashed" : "") + "];\n";
  }
  for (std::size_t i = 1; i < b.nodes.size(); ++i) {
    const auto& n = b.nodes[i];
    out += "  n" + std::to_string(n.parent) + " -- n" + std::to_string(i) +
           " [label=" + dot_id(g.edges()[n.via_edge].name) + "];\n";
  }
  return out + "}\n";
}

}  // namespace dama
