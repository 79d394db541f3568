#pragma once
// Wavefront OBJ serialization of meshes plus the snap-through animation
// sampler. Vertex coordinates round-trip at full double precision; the
// labeled edge list is appended as structured comment lines.

#include <sandglass/energy.hpp>
#include <sandglass/mesh.hpp>

#include <string>
#include <vector>

namespace sandglass {

// OBJ document: optional "# ..." header lines, "v x y z" records, "f a b c"
// records (1-based) and one "# edge class <name> <a> <b>" comment per
// labeled edge (1-based endpoints).
std::string obj_text(const Mesh &mesh, const std::string &header = "");
void write_obj(const std::string &path, const Mesh &mesh, const std::string &header = "");

// Parses v/f records back into a mesh; other record types and comments are
// skipped, so the edge list of a read mesh is empty.
Mesh read_obj(const std::string &path);
Mesh parse_obj(const std::string &text);

// Samples the relaxed transition path of a snapping pair into `frames`
// meshes (frames >= 2; endpoints exact). Arc length is split at the saddle
// so the barrier crossing always sits at parameter 1/2 — the middle frame of
// an odd count is exactly the saddle. All frames share frame 0's face
// orientation even if the path everts through H = 0, so consumers can morph
// vertices under a fixed topology.
std::vector<Mesh> animate(const SnapResult &snap, int frames);

} // namespace sandglass
