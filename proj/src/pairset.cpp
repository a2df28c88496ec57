#include "cubepaths/pairset.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <unordered_set>

namespace cubepaths {

Pair make_pair_of(const Vertex& u, const Vertex& v) {
  require_same_dim(u, v);
  if (u.bits <= v.bits) return Pair{u, v};
  return Pair{v, u};
}

PairKind classify(const Pair& p) {
  if (is_degenerate(p)) return PairKind::degenerate;
  if (is_edge_pair(p)) return PairKind::edge;
  if (is_odd_pair(p)) return PairKind::odd;
  return PairKind::even;
}

void normalize(PairSet& a) { std::sort(a.pairs.begin(), a.pairs.end()); }

void validate_pair_set(const PairSet& a) {
  if (a.dim < 1 || a.dim > kMaxDim)
    throw cube_error(errc::invalid_pair_set, "dimension out of range");
  std::unordered_set<std::uint32_t> seen;
  bool any_nondegenerate = false;
  for (const Pair& p : a.pairs) {
    if (p.a.dim != a.dim || p.b.dim != a.dim)
      throw cube_error(errc::invalid_pair_set, "pair dimension mismatch");
    if (p.a.bits > p.b.bits)
      throw cube_error(errc::invalid_pair_set, "pair not normalized");
    if (!is_degenerate(p)) any_nondegenerate = true;
    if (!seen.insert(p.a.bits).second)
      throw cube_error(errc::invalid_pair_set, "pairs share a vertex");
    if (!is_degenerate(p) && !seen.insert(p.b.bits).second)
      throw cube_error(errc::invalid_pair_set, "pairs share a vertex");
  }
  if (!a.pairs.empty() && !any_nondegenerate)
    throw cube_error(errc::invalid_pair_set, "all pairs degenerate");
}

PairSet make_pair_set(int dim, std::vector<Pair> pairs) {
  PairSet a{dim, std::move(pairs)};
  normalize(a);
  validate_pair_set(a);
  return a;
}

int odd_count(const PairSet& a) {
  int c = 0;
  for (const Pair& p : a.pairs) c += is_odd_pair(p) ? 1 : 0;
  return c;
}

bool is_odd_set(const PairSet& a) {
  return odd_count(a) == a.size();
}

bool is_pure(const PairSet& a) {
  for (const Pair& p : a.pairs)
    if (is_degenerate(p)) return false;
  return true;
}

std::vector<Vertex> support(const PairSet& a) {
  std::vector<Vertex> out;
  out.reserve(2 * a.pairs.size());
  for (const Pair& p : a.pairs) {
    out.push_back(p.a);
    if (!is_degenerate(p)) out.push_back(p.b);
  }
  return out;
}

std::vector<std::uint32_t> support_bits(const PairSet& a) {
  std::vector<std::uint32_t> out;
  out.reserve(2 * a.pairs.size());
  for (const Pair& p : a.pairs) {
    out.push_back(p.a.bits);
    if (!is_degenerate(p)) out.push_back(p.b.bits);
  }
  return out;
}

SideCounts side_counts(const PairSet& a, int i) {
  if (i < 0 || i >= a.dim)
    throw cube_error(errc::invalid_input, "coordinate out of range");
  SideCounts s;
  for (const Pair& p : a.pairs) {
    if (p.a.bit(i) != p.b.bit(i)) continue;
    (p.a.bit(i) == 0 ? s.n0 : s.n1)++;
  }
  return s;
}

ProjectedPairs project_pairs(const PairSet& a, int i, int k) {
  if (i < 0 || i >= a.dim)
    throw cube_error(errc::invalid_input, "coordinate out of range");
  ProjectedPairs out;
  out.dim = a.dim - 1;
  bool any_nondegenerate = false;
  for (const Pair& p : a.pairs) {
    if (p.a.bit(i) != k || p.b.bit(i) != k) continue;
    Pair q = make_pair_of(project(i, k, p.a), project(i, k, p.b));
    any_nondegenerate = any_nondegenerate || !is_degenerate(q);
    out.pairs.push_back(q);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  out.pair_set_valid = out.pairs.empty() || any_nondegenerate;
  return out;
}

PairSet ProjectedPairs::to_pair_set() const {
  if (!pair_set_valid)
    throw cube_error(errc::invalid_pair_set,
                     "projection is nonempty and all-degenerate");
  return make_pair_set(dim, pairs);
}

PairSet inject_pairs(const PairSet& a0, const PairSet& a1, int i, int k) {
  if (a0.dim != a1.dim)
    throw cube_error(errc::dimension_mismatch, "halves of different dimension");
  PairSet out;
  out.dim = a0.dim + 1;
  for (const Pair& p : a0.pairs)
    out.pairs.push_back(make_pair_of(inject(i, k, p.a), inject(i, k, p.b)));
  for (const Pair& p : a1.pairs)
    out.pairs.push_back(make_pair_of(inject(i, 1 - k, p.a), inject(i, 1 - k, p.b)));
  normalize(out);
  validate_pair_set(out);
  return out;
}

std::vector<Vertex> enclosed_with_members(const std::vector<Vertex>& x, int dim) {
  std::unordered_set<std::uint32_t> in_x;
  for (const Vertex& v : x) {
    if (v.dim != dim) throw cube_error(errc::dimension_mismatch, "mixed dimensions");
    in_x.insert(v.bits);
  }
  // A vertex with all neighbours in X is itself adjacent to X.
  std::unordered_set<std::uint32_t> candidates;
  for (const Vertex& v : x)
    for (int i = 0; i < dim; ++i) candidates.insert(v.bits ^ (1u << i));
  std::vector<Vertex> out;
  for (std::uint32_t c : candidates) {
    bool all = true;
    for (int i = 0; i < dim && all; ++i)
      if (!in_x.count(c ^ (1u << i))) all = false;
    if (all) out.push_back(Vertex{c, dim});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vertex> enclosed_outside(const std::vector<Vertex>& x, int dim) {
  std::unordered_set<std::uint32_t> in_x;
  for (const Vertex& v : x) in_x.insert(v.bits);
  std::vector<Vertex> out;
  for (const Vertex& v : enclosed_with_members(x, dim))
    if (!in_x.count(v.bits)) out.push_back(v);
  return out;
}

std::vector<Vertex> enc(const PairSet& a) {
  return enclosed_outside(support(a), a.dim);
}

namespace {

// Does some facet {v : v(i) = k} of Q_4 contain all of X? The facets are the
// only induced copies of Q_3 inside Q_4 (confirmed by an exhaustive test).
bool fits_in_facet(const std::vector<Vertex>& x, int dim) {
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < 2; ++k) {
      bool all = true;
      for (const Vertex& v : x)
        if (v.bit(i) != k) { all = false; break; }
      if (all) return true;
    }
  }
  return false;
}

}  // namespace

DiminishableVerdict is_diminishable(const PairSet& a) {
  if (!is_odd_set(a))
    throw cube_error(errc::not_odd, "diminishability is defined for odd pair-sets");
  const int n = a.dim;
  if (a.empty()) return {false, "empty pair-set"};
  int edges = 0;
  for (const Pair& p : a.pairs) edges += is_edge_pair(p) ? 1 : 0;
  if (a.size() <= n - 1) {
    if (n != 4) return {true, "size at most n-1"};
    if (edges > 0) return {true, "size at most 3 in Q_4 with an edge pair"};
    if (!fits_in_facet(support(a), 4))
      return {true, "size at most 3 in Q_4, support in no sub-Q_3"};
    return {false, "no edge pair and support inside a sub-Q_3 of Q_4"};
  }
  if (a.size() == n) {
    if (n == 4) return {false, "size n = 4"};
    if (edges < 2) return {false, "size n with fewer than two edge pairs"};
    if (!enc(a).empty()) return {false, "size n with an enclosed outside vertex"};
    return {true, "size n with two edge pairs and empty enc"};
  }
  return {false, "more than n pairs"};
}

bool separating(const PairSet& a, int i) {
  if (a.size() != a.dim)
    throw cube_error(errc::size_mismatch, "separating requires |A| = n");
  bool side[2] = {false, false};
  for (const Pair& p : a.pairs) {
    if (!is_edge_pair(p)) continue;
    if (p.a.bit(i) == p.b.bit(i)) side[p.a.bit(i)] = true;
  }
  return side[0] && side[1];
}

bool bad_coordinate(const PairSet& a, int i) {
  const int n = a.dim;
  if (a.size() != n)
    throw cube_error(errc::size_mismatch, "bad coordinate requires |A| = n");
  if (!separating(a, i)) return false;
  SideCounts s = side_counts(a, i);
  int nk[2] = {s.n0, s.n1};
  std::unordered_set<std::uint32_t> sup;
  for (std::uint32_t b : support_bits(a)) sup.insert(b);
  for (int k = 0; k < 2; ++k) {
    if (nk[k] != n - 3 || nk[1 - k] != 1) continue;
    const int m = a.size();
    for (int p0 = 0; p0 < m; ++p0)
      for (int p1 = 0; p1 < m; ++p1)
        for (int p2 = 0; p2 < m; ++p2) {
          if (p0 == p1 || p0 == p2 || p1 == p2) continue;
          auto arrange = [&](int idx, Vertex& alpha, Vertex& beta) {
            // alpha must be the side-k endpoint of a split pair.
            const Pair& p = a.pairs[idx];
            if (p.a.bit(i) == p.b.bit(i)) return false;
            alpha = (p.a.bit(i) == k) ? p.a : p.b;
            beta = (p.a.bit(i) == k) ? p.b : p.a;
            return true;
          };
          Vertex a0, b0, a1, b1;
          if (!arrange(p0, a0, b0) || !arrange(p1, a1, b1)) continue;
          const Pair& q2 = a.pairs[p2];
          if (q2.a.bit(i) == k || q2.b.bit(i) == k) continue;  // aligned on 1-k
          if (q2.a.bit(i) != q2.b.bit(i)) continue;
          if (parity(a0) == parity(a1)) continue;
          std::unordered_set<std::uint32_t> rest = sup;
          for (std::uint32_t w : {a0.bits, b0.bits, a1.bits, b1.bits, q2.a.bits, q2.b.bits})
            rest.erase(w);
          std::uint32_t allowed_mates[4] = {q2.a.bits, b0.bits, b1.bits, q2.b.bits};
          bool saturated = true;
          for (int j = 0; j < 2 && saturated; ++j) {
            const Vertex& aj = (j == 0) ? a0 : a1;
            const Vertex& other = (j == 0) ? a1 : a0;
            for (int c = 0; c < n && saturated; ++c) {
              if (c == i) continue;
              std::uint32_t kappa = aj.bits ^ (1u << c);  // side-k neighbour of a_j
              bool ok = rest.count(kappa) || kappa == other.bits;
              if (!ok) {
                std::uint32_t mate = kappa ^ (1u << i);
                for (std::uint32_t w : allowed_mates)
                  if (mate == w) { ok = true; break; }
              }
              if (!ok) saturated = false;
            }
          }
          if (saturated) return true;
        }
  }
  return false;
}

MergeResult merge_pairs(const PairSet& a, int p1, int p2, const Vertex& b1,
                        const Vertex& b2) {
  if (p1 == p2) throw cube_error(errc::shared_pair, "merge needs two distinct pairs");
  if (p1 < 0 || p2 < 0 || p1 >= a.size() || p2 >= a.size())
    throw cube_error(errc::invalid_input, "pair index out of range");
  if (hamming(b1, b2) != 1)
    throw cube_error(errc::not_an_edge, "merge endpoints are not adjacent");
  auto other_end = [](const Pair& p, const Vertex& v) {
    if (p.a == v) return p.b;
    if (p.b == v) return p.a;
    throw cube_error(errc::invalid_input, "endpoint not in its pair");
  };
  Vertex u1 = other_end(a.pairs[p1], b1);
  Vertex u2 = other_end(a.pairs[p2], b2);
  PairSet out;
  out.dim = a.dim;
  for (int j = 0; j < a.size(); ++j)
    if (j != p1 && j != p2) out.pairs.push_back(a.pairs[j]);
  out.pairs.push_back(make_pair_of(u1, u2));
  normalize(out);
  validate_pair_set(out);
  return MergeResult{std::move(out), b1, b2};
}

// --- automorphisms -------------------------------------------------------

CubeAutomorphisms::CubeAutomorphisms(int dim) : dim_(dim) {
  if (dim < 1 || dim > 6)
    throw cube_error(errc::dimension_too_large,
                     "automorphism enumeration supported for n <= 6");
  const std::uint32_t nverts = 1u << dim;
  std::vector<int> perm(dim);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::uint32_t> permuted(nverts);
    for (std::uint32_t v = 0; v < nverts; ++v) {
      std::uint32_t y = 0;
      for (int j = 0; j < dim; ++j)
        if ((v >> perm[j]) & 1u) y |= 1u << j;
      permuted[v] = y;
    }
    for (std::uint32_t t = 0; t < nverts; ++t) {
      std::vector<std::uint32_t> vmap(nverts);
      for (std::uint32_t v = 0; v < nverts; ++v) vmap[v] = permuted[v] ^ t;
      vmaps_.push_back(std::move(vmap));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

PairSetCode encode(const PairSet& a) {
  PairSetCode code;
  code.reserve(a.pairs.size());
  for (const Pair& p : a.pairs)
    code.push_back((static_cast<std::uint64_t>(p.a.bits) << 32) | p.b.bits);
  std::sort(code.begin(), code.end());
  return code;
}

PairSet decode(const PairSetCode& code, int dim) {
  std::vector<Pair> pairs;
  pairs.reserve(code.size());
  for (std::uint64_t w : code)
    pairs.push_back(make_pair_of(make_vertex(static_cast<std::uint32_t>(w >> 32), dim),
                                 make_vertex(static_cast<std::uint32_t>(w), dim)));
  return make_pair_set(dim, std::move(pairs));
}

namespace {

PairSetCode image_code(const PairSet& a, const CubeAutomorphisms& aut, std::size_t g) {
  PairSetCode code;
  code.reserve(a.pairs.size());
  for (const Pair& p : a.pairs) {
    std::uint32_t x = aut.image(g, p.a.bits);
    std::uint32_t y = aut.image(g, p.b.bits);
    if (x > y) std::swap(x, y);
    code.push_back((static_cast<std::uint64_t>(x) << 32) | y);
  }
  std::sort(code.begin(), code.end());
  return code;
}

}  // namespace

PairSetCode canonical_code(const PairSet& a, const CubeAutomorphisms& aut) {
  if (aut.dim() != a.dim)
    throw cube_error(errc::dimension_mismatch, "automorphism group dimension mismatch");
  PairSetCode best;
  for (std::size_t g = 0; g < aut.size(); ++g) {
    PairSetCode code = image_code(a, aut, g);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

PairSet canonical_form(const PairSet& a) {
  CubeAutomorphisms aut(a.dim);
  return decode(canonical_code(a, aut), a.dim);
}

std::uint64_t orbit_size(const PairSet& a, const CubeAutomorphisms& aut) {
  PairSetCode self = encode(a);
  std::uint64_t stab = 0;
  for (std::size_t g = 0; g < aut.size(); ++g)
    if (image_code(a, aut, g) == self) ++stab;
  return aut.size() / stab;
}

// --- matchings ------------------------------------------------------------

bool matching_valid(const PairSet& a, int i, const Matching& m) {
  std::vector<int> covered(a.size(), 0);
  for (auto [x, y] : m) {
    if (x < 0 || y < 0 || x >= a.size() || y >= a.size() || x == y) return false;
    const Pair& px = a.pairs[x];
    const Pair& py = a.pairs[y];
    if (is_odd_pair(px) || is_odd_pair(py)) return false;
    if (chi(px) + chi(py) != 0) return false;
    if (is_degenerate(px) && is_degenerate(py) && px.a.bit(i) != py.a.bit(i))
      return false;
    covered[x]++;
    covered[y]++;
  }
  for (int j = 0; j < a.size(); ++j) {
    int want = is_odd_pair(a.pairs[j]) ? 0 : 1;
    if (covered[j] != want) return false;
  }
  return true;
}

MatchingResult build_matching(const PairSet& a, int i, std::uint64_t seed) {
  if (!is_balanced(a))
    throw cube_error(errc::unbalanced, "matching requires a balanced pair-set");
  std::vector<int> plus, minus;
  for (int j = 0; j < a.size(); ++j) {
    int c = chi(a.pairs[j]);
    if (c == 2) plus.push_back(j);
    if (c == -2) minus.push_back(j);
  }
  if (plus.size() != minus.size())
    throw cube_error(errc::unbalanced, "uneven even-pair signs in balanced set");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::shuffle(plus.begin(), plus.end(), rng);
  std::shuffle(minus.begin(), minus.end(), rng);

  auto allowed = [&](int x, int y) {
    const Pair& px = a.pairs[x];
    const Pair& py = a.pairs[y];
    if (is_degenerate(px) && is_degenerate(py)) return px.a.bit(i) == py.a.bit(i);
    return true;
  };
  // Kuhn's augmenting paths; the graph is tiny.
  std::vector<int> match_minus(minus.size(), -1);
  std::vector<char> used;
  std::function<bool(int)> try_augment = [&](int pi) -> bool {
    for (std::size_t mi = 0; mi < minus.size(); ++mi) {
      if (used[mi] || !allowed(plus[pi], minus[mi])) continue;
      used[mi] = 1;
      if (match_minus[mi] < 0 || try_augment(match_minus[mi])) {
        match_minus[mi] = static_cast<int>(pi);
        return true;
      }
    }
    return false;
  };
  for (std::size_t pi = 0; pi < plus.size(); ++pi) {
    used.assign(minus.size(), 0);
    if (!try_augment(pi))
      return {false, {}, "no coupling of even pairs satisfies the side constraint"};
  }
  Matching m;
  for (std::size_t mi = 0; mi < minus.size(); ++mi)
    m.emplace_back(plus[match_minus[mi]], minus[mi]);
  std::sort(m.begin(), m.end());
  return {true, std::move(m), ""};
}

}  // namespace cubepaths
