#include "cubepaths/vertex.hpp"

#include <cctype>

namespace cubepaths {

Vertex make_vertex(std::uint32_t bits, int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw cube_error(errc::invalid_vertex, "dimension out of range [1," +
                                               std::to_string(kMaxDim) + "]");
  if (dim < 32 && (bits >> dim) != 0)
    throw cube_error(errc::invalid_vertex, "bit set at coordinate >= dim");
  return Vertex{bits, dim};
}

std::vector<Vertex> neighbors(const Vertex& v) {
  std::vector<Vertex> out;
  out.reserve(v.dim);
  for (int i = 0; i < v.dim; ++i) out.push_back(Vertex{v.bits ^ (1u << i), v.dim});
  return out;
}

Vertex project(int i, int k, const Vertex& v) {
  if (v.dim < 2)
    throw cube_error(errc::undefined_projection, "cannot project below dimension 1");
  if (i < 0 || i >= v.dim)
    throw cube_error(errc::undefined_projection, "coordinate out of range");
  if (v.bit(i) != k)
    throw cube_error(errc::undefined_projection,
                     "projection undefined: coordinate value mismatch");
  return Vertex{project_bits(i, v.bits), v.dim - 1};
}

Vertex inject(int i, int k, const Vertex& v) {
  if (i < 0 || i > v.dim)
    throw cube_error(errc::invalid_vertex, "insert position out of range");
  if (v.dim + 1 > kMaxDim)
    throw cube_error(errc::dimension_too_large, "dimension cap exceeded");
  if (k != 0 && k != 1) throw cube_error(errc::invalid_vertex, "bit value not in {0,1}");
  return Vertex{inject_bits(i, k, v.bits), v.dim + 1};
}

Vertex parse_vertex(const std::string& text, int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw cube_error(errc::invalid_vertex, "dimension out of range");
  bool binary_like = !text.empty();
  for (char c : text)
    if (c != '0' && c != '1') binary_like = false;
  if (binary_like && static_cast<int>(text.size()) == dim) {
    std::uint32_t bits = 0;
    for (int i = 0; i < dim; ++i)
      if (text[i] == '1') bits |= 1u << i;
    return Vertex{bits, dim};
  }
  // decimal fallback
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw cube_error(errc::invalid_vertex, "cannot parse vertex '" + text + "'");
  if (text.empty()) throw cube_error(errc::invalid_vertex, "empty vertex token");
  unsigned long value = std::stoul(text);
  if (dim < 32 && value >= (1ul << dim))
    throw cube_error(errc::invalid_vertex, "vertex value out of range for dimension");
  return Vertex{static_cast<std::uint32_t>(value), dim};
}

std::string format_vertex(const Vertex& v) {
  std::string s(v.dim, '0');
  for (int i = 0; i < v.dim; ++i)
    if (v.bit(i)) s[i] = '1';
  return s;
}

}  // namespace cubepaths
