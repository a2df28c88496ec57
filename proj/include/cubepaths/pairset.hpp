#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubepaths/vertex.hpp"

namespace cubepaths {

enum class PairKind { edge, odd, even, degenerate };

// Unordered pair of vertices; degenerate (a == b) pairs are allowed.
// Stored with a.bits <= b.bits so equality is structural.
struct Pair {
  Vertex a, b;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

Pair make_pair_of(const Vertex& u, const Vertex& v);

inline bool is_degenerate(const Pair& p) { return p.a == p.b; }
inline bool is_edge_pair(const Pair& p) { return hamming(p.a, p.b) == 1; }
inline bool is_odd_pair(const Pair& p) { return parity(p.a) != parity(p.b); }

PairKind classify(const Pair& p);

// chi of a pair: +2, 0 or -2.
inline int chi(const Pair& p) { return parity(p.a) + parity(p.b); }

// Set of pairwise vertex-disjoint pairs in Q_n. If nonempty, at least one
// pair is non-degenerate. Pairs are kept sorted.
struct PairSet {
  int dim = 1;
  std::vector<Pair> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
  bool empty() const { return pairs.empty(); }
  friend auto operator<=>(const PairSet&, const PairSet&) = default;
};

// Validates disjointness and the non-degenerate-member rule, then normalizes.
PairSet make_pair_set(int dim, std::vector<Pair> pairs);
// Normalize order only; assumes invariants hold (internal constructions).
void normalize(PairSet& a);
void validate_pair_set(const PairSet& a);

inline int chi(const PairSet& a) {
  int s = 0;
  for (const Pair& p : a.pairs) s += chi(p);
  return s;
}

int odd_count(const PairSet& a);  // ||A||
inline bool is_balanced(const PairSet& a) { return chi(a) == 0; }
bool is_odd_set(const PairSet& a);
bool is_pure(const PairSet& a);

std::vector<Vertex> support(const PairSet& a);          // union of all endpoints
std::vector<std::uint32_t> support_bits(const PairSet& a);

struct SideCounts {
  int n0 = 0, n1 = 0;
  friend bool operator==(const SideCounts&, const SideCounts&) = default;
};
// (n0, n1): pairs with both endpoints at coordinate value 0 resp. 1.
SideCounts side_counts(const PairSet& a, int i);

// Projection of the i-aligned pairs on side k. The result need not be a
// valid pair-set (nonempty and all-degenerate), hence the flag.
struct ProjectedPairs {
  int dim = 1;
  std::vector<Pair> pairs;
  bool pair_set_valid = true;
  PairSet to_pair_set() const;
};
ProjectedPairs project_pairs(const PairSet& a, int i, int k);

// Places a0 on side k of coordinate i and a1 on side 1-k.
PairSet inject_pairs(const PairSet& a0, const PairSet& a1, int i, int k);

// Vertices all of whose n neighbours lie in X (members included).
std::vector<Vertex> enclosed_with_members(const std::vector<Vertex>& x, int dim);
// enc(X): enclosed vertices outside X.
std::vector<Vertex> enclosed_outside(const std::vector<Vertex>& x, int dim);
std::vector<Vertex> enc(const PairSet& a);

struct DiminishableVerdict {
  bool value = false;
  std::string reason;
};
// Size / edge-pair / enclosure conditions that make the dimension-reduction
// induction applicable to an odd pair-set.
DiminishableVerdict is_diminishable(const PairSet& a);

// Defined for |A| = n: i-aligned edge pairs exist on both sides of i.
bool separating(const PairSet& a, int i);
// The saturated (n-3, 1) configuration that blocks the generic reduction at i.
bool bad_coordinate(const PairSet& a, int i);

// One merge: remove pairs p1, p2, add the pair of their other endpoints;
// (b1, b2) must be an edge with b1 in pair p1 and b2 in pair p2.
struct MergeResult {
  PairSet result;
  Vertex u, v;  // the consumed edge
};
MergeResult merge_pairs(const PairSet& a, int p1, int p2, const Vertex& b1,
                        const Vertex& b2);

// --- automorphisms -------------------------------------------------------

// Aut(Q_n) = coordinate permutations composed with XOR translations.
// Enumerated with per-vertex image tables; intended for n <= 6.
class CubeAutomorphisms {
 public:
  explicit CubeAutomorphisms(int dim);
  int dim() const { return dim_; }
  std::size_t size() const { return vmaps_.size(); }
  std::uint32_t image(std::size_t g, std::uint32_t v) const {
    return vmaps_[g][v];
  }

 private:
  int dim_;
  std::vector<std::vector<std::uint32_t>> vmaps_;
};

// Encoded pair-set for orbit bookkeeping: sorted (lo<<32|hi) per pair.
using PairSetCode = std::vector<std::uint64_t>;
PairSetCode encode(const PairSet& a);
PairSet decode(const PairSetCode& code, int dim);

PairSetCode canonical_code(const PairSet& a, const CubeAutomorphisms& aut);
PairSet canonical_form(const PairSet& a);
// Number of labeled pair-sets in the isomorphism orbit of a.
std::uint64_t orbit_size(const PairSet& a, const CubeAutomorphisms& aut);

// --- matchings on even pairs ---------------------------------------------

// Couples of even-pair indices; every even pair covered once, chi sums to 0
// per couple, and two degenerate pairs may only be coupled when they agree
// at coordinate i.
using Matching = std::vector<std::pair<int, int>>;

struct MatchingResult {
  bool ok = false;
  Matching matching;
  std::string detail;
};
MatchingResult build_matching(const PairSet& a, int i, std::uint64_t seed = 0);
bool matching_valid(const PairSet& a, int i, const Matching& m);

}  // namespace cubepaths
