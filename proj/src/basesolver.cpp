#include "cubepaths/basesolver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <thread>
#include <unordered_set>

namespace cubepaths {

namespace {

struct VertexSetHash {
  std::size_t operator()(const PairSetCode& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : c) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t space_hash_of(const PairSet& a) {
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(a.dim);
  for (std::uint64_t w : encode(a)) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return h;
}

// Search state over raw vertex ids. Masks are single words up to n = 6 and
// word vectors beyond; n stays small enough that simple loops win.
struct Searcher {
  int n = 1;
  std::uint32_t nv = 2;
  std::uint64_t budget = 0;
  std::uint64_t nodes = 0;
  bool exhausted = true;  // false once the budget cuts the tree

  std::vector<std::uint64_t> occupied, reserved;
  std::vector<std::uint32_t> frontier, target;
  std::vector<char> done;
  std::vector<std::vector<std::uint32_t>> paths;
  int unfinished = 0;

  bool test(const std::vector<std::uint64_t>& m, std::uint32_t v) const {
    return (m[v >> 6] >> (v & 63)) & 1ull;
  }
  void set(std::vector<std::uint64_t>& m, std::uint32_t v) { m[v >> 6] |= 1ull << (v & 63); }
  void clear(std::vector<std::uint64_t>& m, std::uint32_t v) { m[v >> 6] &= ~(1ull << (v & 63)); }
  bool is_free(std::uint32_t v) const { return !test(occupied, v) && !test(reserved, v); }

  void init(const PairSet& a, std::uint64_t node_budget) {
    n = a.dim;
    nv = 1u << n;
    budget = node_budget;
    std::size_t words = (nv + 63) / 64;
    occupied.assign(words, 0);
    reserved.assign(words, 0);
    for (const Pair& p : a.pairs) {
      frontier.push_back(p.a.bits);
      target.push_back(p.b.bits);
      paths.push_back({p.a.bits});
      set(occupied, p.a.bits);
      if (is_degenerate(p)) {
        done.push_back(1);
      } else {
        done.push_back(0);
        set(reserved, p.b.bits);
        ++unfinished;
      }
    }
  }

  int chi_of(std::uint32_t v) const { return (std::popcount(v) & 1) ? -1 : 1; }

  // Necessary conditions on the not-yet-consumed region.
  bool feasible() const {
    // parity accounting: odd-remaining pairs force one extra vertex of the
    // parity opposite to their frontier; even-remaining pairs are neutral.
    long long xplus = 0, xminus = 0, total_free = 0;
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (test(occupied, v)) continue;
      (chi_of(v) > 0 ? xplus : xminus)++;
      ++total_free;
    }
    long long want = 0;  // expected xplus - xminus
    long long min_len = 0;
    for (std::size_t j = 0; j < frontier.size(); ++j) {
      if (done[j]) continue;
      int d = std::popcount(frontier[j] ^ target[j]);
      min_len += d;
      if (d & 1) want += (chi_of(frontier[j]) > 0) ? -1 : 1;
    }
    if (xplus - xminus != want) return false;
    if (total_free < min_len) return false;

    // dead free vertices and unreachable targets
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (test(occupied, v)) continue;
      if (test(reserved, v)) {
        int free_nb = 0;
        for (int i = 0; i < n; ++i)
          if (is_free(v ^ (1u << i))) ++free_nb;
        if (free_nb == 0) {
          bool frontier_adj = false;
          for (std::size_t j = 0; j < frontier.size(); ++j)
            if (!done[j] && target[j] == v &&
                std::popcount(frontier[j] ^ v) == 1)
              frontier_adj = true;
          if (!frontier_adj) return false;
        }
      } else {
        int free_nb = 0;
        bool frontier_nb = false, reserved_nb = false;
        for (int i = 0; i < n; ++i) {
          std::uint32_t u = v ^ (1u << i);
          if (is_free(u)) ++free_nb;
          else if (test(reserved, u)) reserved_nb = true;
          else {
            for (std::size_t j = 0; j < frontier.size(); ++j)
              if (!done[j] && frontier[j] == u) { frontier_nb = true; break; }
          }
        }
        if (free_nb + (frontier_nb ? 1 : 0) + (reserved_nb ? 1 : 0) < 2)
          return false;
      }
    }

    // free-region components: each needs an adjacent frontier and an
    // adjacent unfinished target, and one unfinished pair serves at most one.
    std::vector<int> comp(nv, -1);
    int ncomp = 0;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (!is_free(v) || comp[v] >= 0) continue;
      int c = ncomp++;
      if (ncomp > unfinished) return false;
      comp[v] = c;
      stack.assign(1, v);
      bool has_target = false;
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        for (int i = 0; i < n; ++i) {
          std::uint32_t w = u ^ (1u << i);
          if (is_free(w)) {
            if (comp[w] < 0) {
              comp[w] = c;
              stack.push_back(w);
            }
          } else if (test(reserved, w)) {
            has_target = true;
          }
        }
      }
      if (!has_target) return false;
    }
    if (ncomp > 0) {
      std::vector<char> touched(ncomp, 0);
      for (std::size_t j = 0; j < frontier.size(); ++j) {
        if (done[j]) continue;
        std::uint32_t f = frontier[j];
        for (int i = 0; i < n; ++i) {
          std::uint32_t w = f ^ (1u << i);
          if (is_free(w) && comp[w] >= 0) touched[comp[w]] = 1;
        }
      }
      for (int c = 0; c < ncomp; ++c)
        if (!touched[c]) return false;
    }
    return true;
  }

  bool all_covered() const {
    for (std::uint32_t v = 0; v < nv; ++v)
      if (!test(occupied, v)) return false;
    return true;
  }

  bool dfs() {
    if (unfinished == 0) return all_covered();
    if (budget != 0 && nodes >= budget) {
      exhausted = false;
      return false;
    }

    // fail-first: extend the pair with the fewest moves
    int best = -1;
    int best_moves = 1 << 30;
    for (std::size_t j = 0; j < frontier.size(); ++j) {
      if (done[j]) continue;
      int moves = 0;
      std::uint32_t f = frontier[j];
      for (int i = 0; i < n; ++i) {
        std::uint32_t u = f ^ (1u << i);
        if (is_free(u) || u == target[j]) ++moves;
      }
      if (moves < best_moves) {
        best_moves = moves;
        best = static_cast<int>(j);
      }
      if (moves == 0) break;
    }
    if (best_moves == 0) return false;

    std::uint32_t f = frontier[best];
    std::uint32_t tgt = target[best];
    std::vector<std::pair<int, std::uint32_t>> moves;
    for (int i = 0; i < n; ++i) {
      std::uint32_t u = f ^ (1u << i);
      if (!(is_free(u) || u == tgt)) continue;
      int deg = 0;
      for (int c = 0; c < n; ++c)
        if (is_free(u ^ (1u << c))) ++deg;
      // prefer closing late, tight vertices first
      moves.emplace_back(deg + (u == tgt ? n + 1 : 0), u);
    }
    std::sort(moves.begin(), moves.end());

    for (auto [key, u] : moves) {
      ++nodes;
      if (u == tgt) {
        clear(reserved, u);
        set(occupied, u);
        done[best] = 1;
        --unfinished;
        paths[best].push_back(u);
        if (feasible() && dfs()) return true;
        paths[best].pop_back();
        ++unfinished;
        done[best] = 0;
        clear(occupied, u);
        set(reserved, u);
      } else {
        set(occupied, u);
        frontier[best] = u;
        paths[best].push_back(u);
        if (feasible() && dfs()) return true;
        paths[best].pop_back();
        frontier[best] = f;
        clear(occupied, u);
      }
      if (budget != 0 && nodes >= budget) {
        exhausted = false;
        return false;
      }
    }
    return false;
  }
};

}  // namespace

SearchOutcome search_connector(const PairSet& a, const SearchLimits& limits,
                               std::uint64_t seed) {
  validate_pair_set(a);
  SearchOutcome out;
  out.space_hash = space_hash_of(a);
  if (a.empty()) {
    // no paths can cover a nonempty vertex set
    out.status = SearchStatus::non_connectable;
    return out;
  }
  (void)seed;
  Searcher s;
  s.init(a, limits.node_budget);
  bool found = s.feasible() && s.dfs();
  out.nodes = s.nodes;
  if (found) {
    out.status = SearchStatus::found;
    out.connector.dim = a.dim;
    for (const auto& p : s.paths) {
      Path path;
      for (std::uint32_t v : p) path.verts.push_back(Vertex{v, a.dim});
      out.connector.paths.push_back(std::move(path));
    }
  } else if (s.exhausted) {
    out.status = SearchStatus::non_connectable;
  } else {
    out.status = SearchStatus::budget_exceeded;
  }
  return out;
}

namespace {

int count_edge_pairs(const PairSet& a) {
  int e = 0;
  for (const Pair& p : a.pairs) e += is_edge_pair(p) ? 1 : 0;
  return e;
}

bool passes_filter(const PairSet& a, const CensusFilter& f) {
  if (a.size() < f.size_min || a.size() > f.size_max) return false;
  if (f.require_odd && !is_odd_set(a)) return false;
  if (f.require_balanced && !is_balanced(a)) return false;
  if (f.require_pure && !is_pure(a)) return false;
  if (f.edge_pairs_exact >= 0 && count_edge_pairs(a) != f.edge_pairs_exact)
    return false;
  if (f.edge_pairs_min >= 0 && count_edge_pairs(a) < f.edge_pairs_min) return false;
  if (f.require_enc_empty && !enc(a).empty()) return false;
  return true;
}

}  // namespace

CensusSummary enumerate_classes(int dim, const CensusFilter& filter, int threads,
                                bool allow_large) {
  if (dim < 1 || dim > 5)
    throw cube_error(errc::dimension_too_large, "census supported for n <= 5");
  if (dim == 5 && filter.size_max > 2 && !allow_large)
    throw cube_error(errc::dimension_too_large,
                     "full n = 5 census must be requested explicitly");

  const std::uint32_t nv = 1u << dim;

  // candidate pairs in fixed order
  std::vector<Pair> cand;
  for (std::uint32_t x = 0; x < nv; ++x)
    for (std::uint32_t y = x; y < nv; ++y) {
      Pair p = make_pair_of(make_vertex(x, dim), make_vertex(y, dim));
      if (filter.require_odd && !is_odd_pair(p)) continue;
      if (filter.require_pure && is_degenerate(p)) continue;
      cand.push_back(p);
    }

  CubeAutomorphisms aut(dim);
  std::unordered_set<PairSetCode, VertexSetHash> seen;
  std::vector<PairSet> reps;
  std::uint64_t labeled_total = 0;

  std::vector<int> chosen;
  std::uint32_t used_mask = 0;
  auto consider = [&](const std::vector<int>& idx) {
    std::vector<Pair> pairs;
    pairs.reserve(idx.size());
    bool nondeg = false;
    for (int j : idx) {
      pairs.push_back(cand[j]);
      nondeg = nondeg || !is_degenerate(cand[j]);
    }
    if (!nondeg) return;  // not a pair-set
    PairSet a{dim, std::move(pairs)};
    normalize(a);
    if (!passes_filter(a, filter)) return;
    ++labeled_total;
    PairSetCode code = canonical_code(a, aut);
    if (seen.insert(code).second) reps.push_back(decode(code, dim));
  };

  std::function<void(int)> gen = [&](int start) {
    if (static_cast<int>(chosen.size()) >= filter.size_min) consider(chosen);
    if (static_cast<int>(chosen.size()) == filter.size_max) return;
    for (int j = start; j < static_cast<int>(cand.size()); ++j) {
      std::uint32_t pm = (1u << cand[j].a.bits) | (1u << cand[j].b.bits);
      if (used_mask & pm) continue;
      used_mask |= pm;
      chosen.push_back(j);
      gen(j + 1);
      chosen.pop_back();
      used_mask &= ~pm;
    }
  };
  gen(0);

  // decide one representative per class, sharded over threads
  std::sort(reps.begin(), reps.end(),
            [](const PairSet& x, const PairSet& y) { return encode(x) < encode(y); });
  std::vector<CensusRecord> records(reps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t j = next.fetch_add(1);
      if (j >= reps.size()) return;
      CensusRecord rec;
      rec.canonical = reps[j];
      rec.orbit_size = orbit_size(reps[j], aut);
      SearchOutcome so = search_connector(reps[j]);
      rec.nodes = so.nodes;
      if (so.status == SearchStatus::found) {
        rec.connectable = true;
        rec.certificate = "connector";
        rec.connector = std::move(so.connector);
      } else {
        rec.connectable = false;
        rec.certificate = "exhaustion";
      }
      records[j] = std::move(rec);
    }
  };
  int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CensusSummary out;
  out.records = std::move(records);
  out.classes_total = out.records.size();
  out.labeled_total = labeled_total;
  for (const CensusRecord& r : out.records) {
    if (!r.connectable) {
      out.classes_non_connectable++;
      out.labeled_non_connectable += r.orbit_size;
    }
  }
  return out;
}

}  // namespace cubepaths
