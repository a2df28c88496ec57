#pragma once

#include <vector>

#include "cubepaths/pairset.hpp"
#include "cubepaths/vertex.hpp"

namespace cubepaths {

// One path of a connector: consecutive vertices differ in a single
// coordinate; a degenerate pair is covered by a singleton path.
struct Path {
  std::vector<Vertex> verts;

  const Vertex& front() const { return verts.front(); }
  const Vertex& back() const { return verts.back(); }
  int length() const { return static_cast<int>(verts.size()) - 1; }
};

// Family of vertex-disjoint paths, one per pair, jointly covering V_n.
struct Connector {
  int dim = 1;
  std::vector<Path> paths;
};

}  // namespace cubepaths
