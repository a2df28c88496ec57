#include "cubepaths/completion.hpp"

#include <algorithm>
#include <bit>

namespace cubepaths {

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::keep_odd: return "keep_odd";
    case StepKind::bridge_odd: return "bridge_odd";
    case StepKind::keep_couple: return "keep_couple";
    case StepKind::bridge_couple_three: return "bridge_couple_three";
    case StepKind::bridge_couple_opposite: return "bridge_couple_opposite";
    case StepKind::bridge_couple_split: return "bridge_couple_split";
  }
  return "?";
}

PairSet replay_merges(const CompletionTrace& t) {
  PairSet cur = t.output;
  for (const Vertex& u : t.merge_script) {
    Vertex mate{u.bits ^ (1u << t.coord), u.dim};
    int pu = -1, pm = -1;
    for (int j = 0; j < cur.size(); ++j) {
      if (cur.pairs[j].a == u || cur.pairs[j].b == u) pu = j;
      if (cur.pairs[j].a == mate || cur.pairs[j].b == mate) pm = j;
    }
    if (pu < 0 || pm < 0)
      throw cube_error(errc::invalid_input, "merge script names a non-endpoint");
    cur = merge_pairs(cur, pu, pm, u, mate).result;
  }
  return cur;
}

CompletionCounts completion_counts(const PairSet& a, int i, const Matching& r) {
  CompletionCounts c;
  for (const Pair& p : a.pairs)
    if (is_odd_pair(p) && p.a.bit(i) == p.b.bit(i)) c.k0++;
  for (auto [x, y] : r) {
    const Pair& p = a.pairs[x];
    const Pair& q = a.pairs[y];
    int ones = p.a.bit(i) + p.b.bit(i) + q.a.bit(i) + q.b.bit(i);
    bool p_aligned = p.a.bit(i) == p.b.bit(i);
    bool q_aligned = q.a.bit(i) == q.b.bit(i);
    if (p_aligned && q_aligned && (ones == 0 || ones == 4)) c.k1++;
    if (ones == 1 || ones == 3) c.k2++;
  }
  c.predicted_size = 2 * a.size() - c.k0 - 2 * c.k1 - c.k2;
  const long long quarter = 1ll << (a.dim - 2);
  c.guaranteed = c.predicted_size <= quarter ||
                 (is_odd_set(a) && 2 * a.size() - c.k0 - 1 <= quarter);
  return c;
}

SideProfile side_profile(const PairSet& a, int i, const Matching& r) {
  SideProfile s;
  for (const Pair& p : a.pairs)
    if (is_odd_pair(p) && p.a.bit(i) == p.b.bit(i)) s.m_o[p.a.bit(i)]++;
  for (auto [x, y] : r) {
    const Pair& p = a.pairs[x];
    const Pair& q = a.pairs[y];
    int ones = p.a.bit(i) + p.b.bit(i) + q.a.bit(i) + q.b.bit(i);
    if (ones == 0) s.m_e[0]++;
    if (ones == 4) s.m_e[1]++;
    if (ones == 3) s.m_3[1]++;
    if (ones == 1) s.m_3[0]++;
  }
  return s;
}

CompletionBuilder::CompletionBuilder(const PairSet& a, int i, Matching r,
                                     std::uint64_t seed)
    : input_(a), coord_(i), matching_(std::move(r)), rng_(seed ^ 0xa0761d6478bd642full) {
  validate_pair_set(a);
  if (a.empty()) throw cube_error(errc::invalid_input, "empty pair-set");
  if (!is_balanced(a)) throw cube_error(errc::unbalanced, "input not balanced");
  if (i < 0 || i >= a.dim) throw cube_error(errc::invalid_input, "coordinate out of range");
  if (!matching_valid(a, i, matching_))
    throw cube_error(errc::bad_matching, "not a valid matching for this pair-set");
  for (int j = 0; j < a.size(); ++j) remaining_.push_back(j);
  for (const Vertex& v : support(a)) {
    occupied_.insert(v.bits);
    side_proj_[v.bit(i)].insert(project_bits(i, v.bits));
  }
}

bool CompletionBuilder::occupy(const Vertex& gamma) {
  std::uint32_t g = gamma.bits;
  std::uint32_t mate = g ^ (1u << coord_);
  if (occupied_.count(g) || occupied_.count(mate)) return false;
  occupied_.insert(g);
  occupied_.insert(mate);
  std::uint32_t pw = project_bits(coord_, g);
  side_proj_[gamma.bit(coord_)].insert(pw);
  side_proj_[1 - gamma.bit(coord_)].insert(pw);
  return true;
}

bool CompletionBuilder::enc_hazard(const Vertex& gamma) const {
  // Adding gamma and its cross neighbour can only enclose a projected vertex
  // adjacent to their common projection.
  std::uint32_t pw = project_bits(coord_, gamma.bits);
  const int m = input_.dim - 1;
  for (int s = 0; s < 2; ++s) {
    const auto& side = side_proj_[s];
    for (int c = 0; c < m; ++c) {
      std::uint32_t u = pw ^ (1u << c);
      if (side.count(u)) continue;
      bool enclosed = true;
      for (int c2 = 0; c2 < m && enclosed; ++c2) {
        std::uint32_t w = u ^ (1u << c2);
        if (w != pw && !side.count(w)) enclosed = false;
      }
      if (enclosed) return true;
    }
  }
  return false;
}

bool CompletionBuilder::enc_invariant_holds() const {
  const int m = input_.dim - 1;
  for (int s = 0; s < 2; ++s) {
    std::vector<Vertex> x;
    x.reserve(side_proj_[s].size());
    for (std::uint32_t b : side_proj_[s]) x.push_back(Vertex{b, m});
    if (!enclosed_outside(x, m).empty()) return false;
  }
  return true;
}

std::vector<Vertex> CompletionBuilder::admissible(int side, int chi_sign,
                                                  bool enc_safe,
                                                  std::uint64_t salt) {
  const int n = input_.dim;
  std::vector<Vertex> out;
  if (n <= 16) {
    const std::uint32_t half = 1u << (n - 1);
    for (std::uint32_t x = 0; x < half; ++x) {
      std::uint32_t v = inject_bits(coord_, side, x);
      if (((std::popcount(v) & 1) ? -1 : 1) != chi_sign) continue;
      if (occupied_.count(v) || occupied_.count(v ^ (1u << coord_))) continue;
      out.push_back(Vertex{v, n});
    }
    std::shuffle(out.begin(), out.end(), rng_);
  } else {
    // uniform rejection sampling over the quarter-cube of fixed side+parity
    std::uint64_t tries = 64ull * n + salt % 7;
    int fix = (coord_ == 0) ? 1 : 0;
    for (std::uint64_t t = 0; t < tries && out.size() < 64; ++t) {
      std::uint32_t x = static_cast<std::uint32_t>(rng_()) & ((1u << (n - 1)) - 1);
      std::uint32_t v = inject_bits(coord_, side, x);
      if (((std::popcount(v) & 1) ? -1 : 1) != chi_sign) v ^= 1u << fix;
      if (occupied_.count(v) || occupied_.count(v ^ (1u << coord_))) continue;
      Vertex cand{v, n};
      if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
    }
  }
  if (enc_safe) {
    std::vector<Vertex> safe;
    for (const Vertex& v : out) {
      if (!enc_hazard(v)) safe.push_back(v);
      if (safe.size() >= 8) break;  // lazily cut, first hit is used anyway
    }
    return safe;
  }
  return out;
}

void CompletionBuilder::push_step(StepKind kind, std::vector<Pair> consumed,
                                  std::vector<Pair> produced,
                                  std::vector<Vertex> bridges) {
  for (const Pair& p : produced) {
    produced_.push_back(p);
    produced_side_[p.a.bit(coord_)]++;
  }
  for (const Vertex& g : bridges) merge_script_.push_back(g);
  steps_.push_back(CompletionStep{kind, std::move(consumed), std::move(produced),
                                  std::move(bridges)});
}

bool CompletionBuilder::apply_keep_odd(int idx) {
  const Pair& p = input_.pairs[idx];
  push_step(StepKind::keep_odd, {p}, {p}, {});
  std::erase(remaining_, idx);
  return true;
}

bool CompletionBuilder::bridge_odd_pair(int idx, const Vertex& gamma) {
  if (std::find(remaining_.begin(), remaining_.end(), idx) == remaining_.end())
    return false;
  const Pair& p = input_.pairs[idx];
  if (!is_odd_pair(p) || p.a.bit(coord_) == p.b.bit(coord_)) return false;
  Vertex alpha = (p.a.bit(coord_) == gamma.bit(coord_)) ? p.a : p.b;
  Vertex beta = (alpha == p.a) ? p.b : p.a;
  if (parity(gamma) == parity(alpha)) return false;
  if (!occupy(gamma)) return false;
  Vertex mate{gamma.bits ^ (1u << coord_), gamma.dim};
  push_step(StepKind::bridge_odd, {p},
            {make_pair_of(alpha, gamma), make_pair_of(mate, beta)}, {gamma});
  std::erase(remaining_, idx);
  return true;
}

std::vector<Vertex> CompletionBuilder::bridge_candidates(int idx, int side,
                                                         bool enc_safe) {
  const Pair& p = input_.pairs[idx];
  Vertex alpha = (p.a.bit(coord_) == side) ? p.a : p.b;
  return admissible(side, -parity(alpha), enc_safe, static_cast<std::uint64_t>(idx));
}

bool CompletionBuilder::apply_bridge_odd(int idx, bool enc_safe, std::string* why) {
  const Pair& p = input_.pairs[idx];
  int first = rng_() & 1;
  for (int t = 0; t < 2; ++t) {
    int side = (t == 0) ? first : 1 - first;
    Vertex alpha = (p.a.bit(coord_) == side) ? p.a : p.b;
    for (const Vertex& g : admissible(side, -parity(alpha), enc_safe,
                                      static_cast<std::uint64_t>(idx)))
      if (bridge_odd_pair(idx, g)) return true;
  }
  if (why) *why = "no bridge vertex for a split odd pair";
  stuck_kind_ = StepKind::bridge_odd;
  return false;
}

bool CompletionBuilder::apply_couple(const CoupleRef& c, CompletionMode mode,
                                     int target_side, std::string* why) {
  const Pair& p = input_.pairs[c.a];
  const Pair& q = input_.pairs[c.b];
  bool p_aligned = p.a.bit(coord_) == p.b.bit(coord_);
  bool q_aligned = q.a.bit(coord_) == q.b.bit(coord_);

  auto fail = [&](const char* msg, StepKind kind) {
    if (why) *why = msg;
    stuck_kind_ = kind;
    return false;
  };

  if (p_aligned && q_aligned && p.a.bit(coord_) == q.a.bit(coord_)) {
    push_step(StepKind::keep_couple, {p, q}, {p, q}, {});
    std::erase(remaining_, c.a);
    std::erase(remaining_, c.b);
    return true;
  }

  if (p_aligned != q_aligned) {
    // 3-1 split: the aligned pair fixes the majority side
    const Pair& al = p_aligned ? p : q;
    const Pair& sp = p_aligned ? q : p;
    int m = al.a.bit(coord_);
    Vertex ap = (sp.a.bit(coord_) == m) ? sp.a : sp.b;
    Vertex bp = (ap == sp.a) ? sp.b : sp.a;
    for (const Vertex& g : admissible(m, parity(ap), false, 17)) {
      if (!occupy(g)) continue;
      Vertex mate{g.bits ^ (1u << coord_), g.dim};
      push_step(StepKind::bridge_couple_three, {p, q},
                {al, make_pair_of(ap, g), make_pair_of(mate, bp)}, {g});
      std::erase(remaining_, c.a);
      std::erase(remaining_, c.b);
      return true;
    }
    return fail("no bridge vertex for a 3-1 couple", StepKind::bridge_couple_three);
  }

  if (p_aligned && q_aligned) {
    // opposite sides; split one of them, the untouched pair's side keeps the evens
    const Pair* keep = nullptr;
    const Pair* open = nullptr;
    if (is_degenerate(p) && is_degenerate(q))
      return fail("two degenerate pairs coupled across the coordinate",
                  StepKind::bridge_couple_opposite);
    if (is_degenerate(p)) { keep = &p; open = &q; }
    else if (is_degenerate(q)) { keep = &q; open = &p; }
    else if (mode == CompletionMode::parity_targeted) {
      keep = (p.a.bit(coord_) == target_side) ? &p : &q;
      open = (keep == &p) ? &q : &p;
    } else {
      // balance the produced sides
      const Pair* cand0 = (produced_side_[p.a.bit(coord_)] <=
                           produced_side_[q.a.bit(coord_)]) ? &p : &q;
      keep = cand0;
      open = (keep == &p) ? &q : &p;
    }
    if (mode == CompletionMode::parity_targeted &&
        keep->a.bit(coord_) != target_side)
      return fail("degenerate pair forces the even pairs onto the other side",
                  StepKind::bridge_couple_opposite);
    for (int attempt = 0; attempt < 2; ++attempt) {
      int ks = open->a.bit(coord_);
      auto gs = admissible(ks, -parity(open->a), false, 23);
      bool placed = false;
      for (const Vertex& g : gs) {
        if (!occupy(g)) continue;
        Vertex gm{g.bits ^ (1u << coord_), g.dim};
        for (const Vertex& g2 : admissible(ks, -parity(open->a), false, 29)) {
          if (!occupy(g2)) continue;
          Vertex gm2{g2.bits ^ (1u << coord_), g2.dim};
          push_step(StepKind::bridge_couple_opposite, {p, q},
                    {*keep, make_pair_of(open->a, g), make_pair_of(open->b, g2),
                     make_pair_of(gm, gm2)},
                    {g, g2});
          std::erase(remaining_, c.a);
          std::erase(remaining_, c.b);
          placed = true;
          break;
        }
        if (placed) break;
        // could not place the second bridge: release the first and retry
        occupied_.erase(g.bits);
        occupied_.erase(gm.bits);
        std::uint32_t pw = project_bits(coord_, g.bits);
        side_proj_[0].erase(pw);
        side_proj_[1].erase(pw);
      }
      if (placed) return true;
      if (mode == CompletionMode::parity_targeted || is_degenerate(*open) ||
          is_degenerate(*keep))
        break;
      std::swap(keep, open);  // plain mode: try the other orientation
    }
    return fail("no bridge vertices for an opposite-sides couple",
                StepKind::bridge_couple_opposite);
  }

  // both pairs split: orientation chooses the even side
  int prefer;
  if (mode == CompletionMode::parity_targeted) prefer = target_side;
  else prefer = (produced_side_[0] <= produced_side_[1]) ? 0 : 1;
  for (int attempt = 0; attempt < 2; ++attempt) {
    int s = (attempt == 0) ? prefer : 1 - prefer;
    if (mode == CompletionMode::parity_targeted && s != target_side) break;
    Vertex ap = (p.a.bit(coord_) == s) ? p.a : p.b;
    Vertex bp = (ap == p.a) ? p.b : p.a;
    Vertex aq = (q.a.bit(coord_) == s) ? q.a : q.b;
    Vertex bq = (aq == q.a) ? q.b : q.a;
    for (const Vertex& g : admissible(s, parity(ap), false, 31)) {
      if (!occupy(g)) continue;
      Vertex gm{g.bits ^ (1u << coord_), g.dim};
      bool placed = false;
      for (const Vertex& g2 : admissible(s, parity(aq), false, 37)) {
        if (!occupy(g2)) continue;
        Vertex gm2{g2.bits ^ (1u << coord_), g2.dim};
        push_step(StepKind::bridge_couple_split, {p, q},
                  {make_pair_of(ap, g), make_pair_of(aq, g2),
                   make_pair_of(gm, bp), make_pair_of(gm2, bq)},
                  {g, g2});
        std::erase(remaining_, c.a);
        std::erase(remaining_, c.b);
        placed = true;
        break;
      }
      if (placed) return true;
      occupied_.erase(g.bits);
      occupied_.erase(gm.bits);
      std::uint32_t pw = project_bits(coord_, g.bits);
      side_proj_[0].erase(pw);
      side_proj_[1].erase(pw);
    }
  }
  return fail("no bridge vertices for a split couple", StepKind::bridge_couple_split);
}

bool CompletionBuilder::finish(CompletionMode mode, int target_side,
                               std::string* why) {
  if (finished_) throw cube_error(errc::invalid_input, "builder already finished");
  const bool enc_safe = (mode == CompletionMode::enc_preserving);

  // aligned odd pairs first, then split odd pairs, then couples in order
  std::vector<int> snapshot = remaining_;
  for (int idx : snapshot) {
    const Pair& p = input_.pairs[idx];
    if (is_odd_pair(p) && p.a.bit(coord_) == p.b.bit(coord_)) apply_keep_odd(idx);
  }
  snapshot = remaining_;
  for (int idx : snapshot) {
    const Pair& p = input_.pairs[idx];
    if (is_odd_pair(p) && p.a.bit(coord_) != p.b.bit(coord_))
      if (!apply_bridge_odd(idx, enc_safe, why)) return false;
  }
  for (auto [x, y] : matching_) {
    bool x_left = std::find(remaining_.begin(), remaining_.end(), x) != remaining_.end();
    if (!x_left) continue;  // forced earlier by the caller
    if (!apply_couple(CoupleRef{x, y}, mode, target_side, why)) return false;
  }
  finished_ = remaining_.empty();
  if (!finished_ && why) *why = "pairs left unprocessed";
  return finished_;
}

CompletionTrace CompletionBuilder::take_trace() {
  if (!remaining_.empty())
    throw cube_error(errc::invalid_input, "completion not finished");
  CompletionTrace t;
  t.dim = input_.dim;
  t.coord = coord_;
  t.input = input_;
  t.matching = matching_;
  t.steps = std::move(steps_);
  t.output = make_pair_set(input_.dim, produced_);
  t.merge_script = std::move(merge_script_);
  return t;
}

CompletionResult complete(const PairSet& a, int i, const Matching& r,
                          const CompletionOptions& opt) {
  CompletionBuilder b(a, i, r, opt.seed);
  CompletionResult res;
  std::string why;
  if (!b.finish(opt.mode, opt.target_side, &why)) {
    res.ok = false;
    res.stuck_step = b.stuck_kind();
    res.detail = why;
    return res;
  }
  res.ok = true;
  res.trace = b.take_trace();
  return res;
}

CompletionResult complete_enc_preserving(const PairSet& a, int i,
                                         std::uint64_t seed) {
  if (!is_odd_set(a))
    throw cube_error(errc::precondition_violated, "input must be odd");
  SideCounts s = side_counts(a, i);
  const long long quarter = 1ll << (a.dim - 2);
  if (2 * a.size() - s.n0 - s.n1 >= quarter)
    throw cube_error(errc::precondition_violated,
                     "2|A| - n0 - n1 must be below a quarter of the cube");
  if (a.size() - s.n0 > a.dim - 1 || a.size() - s.n1 > a.dim - 1)
    throw cube_error(errc::precondition_violated,
                     "a side would receive more than n-1 pairs");
  CompletionBuilder b(a, i, {}, seed);
  if (!b.enc_invariant_holds())
    throw cube_error(errc::precondition_violated,
                     "a projection already has an enclosed outside vertex");
  CompletionResult res;
  std::string why;
  if (!b.finish(CompletionMode::enc_preserving, 0, &why)) {
    res.ok = false;
    res.stuck_step = b.stuck_kind();
    res.detail = why;
    return res;
  }
  res.ok = true;
  res.trace = b.take_trace();
  return res;
}

CompletionResult complete_parity_targeted(const PairSet& a, int i,
                                          const Matching& r, int k,
                                          std::uint64_t seed) {
  if (2 * a.size() > (1 << (a.dim - 2)))
    throw cube_error(errc::precondition_violated,
                     "2|A| must fit in a quarter of the cube");
  CompletionOptions opt;
  opt.seed = seed;
  opt.mode = CompletionMode::parity_targeted;
  opt.target_side = k;
  return complete(a, i, r, opt);
}

}  // namespace cubepaths
