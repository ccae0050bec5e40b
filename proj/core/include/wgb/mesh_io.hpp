#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wgb/mesh.hpp"

namespace wgb {

/// Mesh JSON: {"vertices": [[x, y], ...], "elements": [[v0, v1, ...], ...]}
/// with counter-clockwise loops. Boundary is inferred from edge sharing.
Mesh read_mesh_json(const std::filesystem::path& path);
Mesh parse_mesh_json(std::string_view text);
std::string mesh_to_json(const Mesh& mesh);
void write_mesh_json(const Mesh& mesh, const std::filesystem::path& path);

struct GeneratorSpec {
  MeshFamily family = MeshFamily::quad;
  int nx = 8;
  int ny = 8;
};

/// Parses "family:nx=8,ny=8"; omitted ny defaults to nx.
GeneratorSpec parse_generator_spec(std::string_view text);

}  // namespace wgb
