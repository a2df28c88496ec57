#include "cubepaths/verify.hpp"

#include <algorithm>

namespace cubepaths {

const char* violation_clause_name(ViolationClause c) {
  switch (c) {
    case ViolationClause::pairing: return "pairing";
    case ViolationClause::endpoint: return "endpoint";
    case ViolationClause::adjacency: return "adjacency";
    case ViolationClause::coverage: return "coverage";
    case ViolationClause::malformed: return "malformed";
  }
  return "?";
}

namespace {

std::optional<Violation> check_shape(int dim, const std::vector<Vertex>& seq) {
  if (seq.empty())
    return Violation{ViolationClause::malformed, "empty sequence", {}};
  for (const Vertex& v : seq) {
    if (v.dim != dim)
      return Violation{ViolationClause::malformed, "vertex of wrong dimension", {v}};
    if (dim < 32 && (v.bits >> dim) != 0)
      return Violation{ViolationClause::malformed, "vertex out of range", {v}};
  }
  for (std::size_t t = 1; t < seq.size(); ++t)
    if (hamming(seq[t - 1], seq[t]) != 1)
      return Violation{ViolationClause::adjacency,
                       "consecutive vertices not adjacent",
                       {seq[t - 1], seq[t]}};
  return std::nullopt;
}

}  // namespace

std::optional<Violation> check(const PairSet& a, const Connector& c) {
  if (c.dim != a.dim)
    return Violation{ViolationClause::malformed, "connector dimension mismatch", {}};
  if (c.paths.size() != a.pairs.size())
    return Violation{ViolationClause::pairing,
                     "path count differs from pair count", {}};

  // endpoints and per-path shape
  std::vector<char> pair_used(a.pairs.size(), 0);
  for (const Path& p : c.paths) {
    if (auto bad = check_shape(a.dim, p.verts)) return bad;
    Pair ends = (p.verts.size() == 1) ? Pair{p.verts.front(), p.verts.front()}
                                      : make_pair_of(p.verts.front(), p.verts.back());
    bool matched = false;
    for (std::size_t j = 0; j < a.pairs.size(); ++j) {
      if (pair_used[j] || !(a.pairs[j] == ends)) continue;
      // a degenerate pair is covered exactly by a singleton path
      if (is_degenerate(a.pairs[j]) != (p.verts.size() == 1)) continue;
      pair_used[j] = 1;
      matched = true;
      break;
    }
    if (!matched)
      return Violation{ViolationClause::endpoint,
                       "path ends match no unused pair",
                       {p.verts.front(), p.verts.back()}};
  }

  // exact coverage of V_n
  const std::uint64_t total = 1ull << a.dim;
  std::vector<bool> seen(total, false);
  std::uint64_t count = 0;
  for (const Path& p : c.paths)
    for (const Vertex& v : p.verts) {
      if (seen[v.bits])
        return Violation{ViolationClause::coverage, "vertex visited twice", {v}};
      seen[v.bits] = true;
      ++count;
    }
  if (count != total)
    return Violation{ViolationClause::coverage, "not all vertices covered", {}};
  return std::nullopt;
}

std::optional<Violation> check_gray(int dim, const std::vector<Vertex>& seq,
                                    bool cyclic) {
  if (auto bad = check_shape(dim, seq)) return bad;
  const std::uint64_t total = 1ull << dim;
  if (seq.size() != total)
    return Violation{ViolationClause::coverage, "sequence length is not 2^n", {}};
  std::vector<bool> seen(total, false);
  for (const Vertex& v : seq) {
    if (seen[v.bits])
      return Violation{ViolationClause::coverage, "vertex visited twice", {v}};
    seen[v.bits] = true;
  }
  if (cyclic && hamming(seq.front(), seq.back()) != 1)
    return Violation{ViolationClause::adjacency, "endpoints not adjacent (cyclic)",
                     {seq.front(), seq.back()}};
  return std::nullopt;
}

std::optional<Violation> check_gray_between(int dim, const std::vector<Vertex>& seq,
                                            const Vertex& from, const Vertex& to) {
  if (auto bad = check_gray(dim, seq, false)) return bad;
  if (!(seq.front() == from) || !(seq.back() == to))
    return Violation{ViolationClause::endpoint, "sequence ends are not the requested pair",
                     {seq.front(), seq.back()}};
  return std::nullopt;
}

}  // namespace cubepaths
