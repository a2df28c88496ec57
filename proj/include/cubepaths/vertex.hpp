#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubepaths {

enum class errc {
  invalid_vertex,
  dimension_mismatch,
  undefined_projection,
  invalid_pair_set,
  dimension_too_large,
  not_odd,
  size_mismatch,
  not_an_edge,
  shared_pair,
  unbalanced,
  bad_matching,
  constraint_infeasible,
  precondition_violated,
  even_distance,
  wrong_subproblem,
  invalid_input,
};

class cube_error : public std::runtime_error {
 public:
  cube_error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Dimensions are capped so a full occupancy bitset over V_n stays small.
inline constexpr int kMaxDim = 30;

// A vertex of Q_n. Coordinate i is bit i of `bits` (coordinate 0 = LSB);
// the textual form writes coordinates 0..n-1 left to right.
struct Vertex {
  std::uint32_t bits = 0;
  int dim = 1;

  int bit(int i) const { return static_cast<int>((bits >> i) & 1u); }
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

Vertex make_vertex(std::uint32_t bits, int dim);

inline void require_same_dim(const Vertex& u, const Vertex& v) {
  if (u.dim != v.dim)
    throw cube_error(errc::dimension_mismatch, "vertices of different dimension");
}

// chi: +1 for even Hamming weight, -1 for odd.
inline int parity(const Vertex& v) {
  return (std::popcount(v.bits) & 1) ? -1 : 1;
}

inline Vertex xor_vertices(const Vertex& u, const Vertex& v) {
  require_same_dim(u, v);
  return Vertex{u.bits ^ v.bits, u.dim};
}

inline int hamming(const Vertex& u, const Vertex& v) {
  require_same_dim(u, v);
  return std::popcount(u.bits ^ v.bits);
}

inline bool adjacent(const Vertex& u, const Vertex& v) {
  return hamming(u, v) == 1;
}

inline Vertex zero_vertex(int dim) { return make_vertex(0, dim); }
inline Vertex unit_vertex(int i, int dim) { return make_vertex(1u << i, dim); }

// The n neighbours v ^ e_i, in ascending coordinate order.
std::vector<Vertex> neighbors(const Vertex& v);

// Deletes coordinate i (which must hold value k), shifting higher coordinates down.
Vertex project(int i, int k, const Vertex& v);

// Inserts value k at coordinate i, shifting higher coordinates up. Inverse of project.
Vertex inject(int i, int k, const Vertex& v);

// Raw-bitmask variants for hot loops where the dimension is tracked by the caller.
inline std::uint32_t project_bits(int i, std::uint32_t bits) {
  std::uint32_t low = bits & ((1u << i) - 1u);
  std::uint32_t high = (bits >> (i + 1)) << i;
  return low | high;
}
inline std::uint32_t inject_bits(int i, int k, std::uint32_t bits) {
  std::uint32_t low = bits & ((1u << i) - 1u);
  std::uint32_t high = (bits >> i) << (i + 1);
  return low | high | (static_cast<std::uint32_t>(k) << i);
}

// "1011" reads coordinate 0..n-1 left to right; a decimal form with explicit n
// is accepted when the token does not look like an n-char bitstring.
Vertex parse_vertex(const std::string& text, int dim);
std::string format_vertex(const Vertex& v);

}  // namespace cubepaths
