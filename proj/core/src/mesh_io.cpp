#include "wgb/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wgb {

Mesh parse_mesh_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("mesh json: ") + e.what());
  }
  if (!doc.contains("vertices") || !doc.contains("elements")) {
    throw std::invalid_argument("mesh json: expected 'vertices' and 'elements' arrays");
  }

  std::vector<Point> vertices;
  for (const auto& v : doc.at("vertices")) {
    if (!v.is_array() || v.size() != 2) throw std::invalid_argument("mesh json: vertex must be [x, y]");
    vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  std::vector<std::vector<Index>> loops;
  for (const auto& el : doc.at("elements")) loops.push_back(el.get<std::vector<Index>>());
  return Mesh::from_polygons(std::move(vertices), std::move(loops));
}

Mesh read_mesh_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_mesh_json(buffer.str());
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (const auto& p : mesh.vertices()) doc["vertices"].push_back({p.x(), p.y()});
  doc["elements"] = nlohmann::json::array();
  for (const auto& el : mesh.elements()) doc["elements"].push_back(el.vertex_ids);
  return doc.dump(1);
}

void write_mesh_json(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path.string());
  out << mesh_to_json(mesh) << '\n';
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.family = parse_family(text.substr(0, colon));
  bool have_ny = false;
  if (colon == std::string_view::npos) return spec;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("generator spec: expected key=value in '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    int parsed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw std::invalid_argument("generator spec: bad integer '" + std::string(value) + "'");
    }
    if (key == "nx") {
      spec.nx = parsed;
      if (!have_ny) spec.ny = parsed;
    } else if (key == "ny") {
      spec.ny = parsed;
      have_ny = true;
    } else {
      throw std::invalid_argument("generator spec: unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

}  // namespace wgb
