#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "cubepaths/pairset.hpp"

namespace cubepaths {

// One rewrite step of the alignment construction. An aligned pair is kept;
// a split pair is bridged through a fresh edge (gamma, gamma ^ e_i); matched
// even couples are kept or bridged depending on how they sit across i.
enum class StepKind {
  keep_odd,                // odd pair already aligned
  bridge_odd,              // odd split pair, one bridge
  keep_couple,             // couple aligned on one side
  bridge_couple_three,     // couple with a 3-1 split, one bridge
  bridge_couple_opposite,  // couple aligned on opposite sides, two bridges
  bridge_couple_split,     // couple of two split pairs, two bridges
};

const char* step_kind_name(StepKind k);

struct CompletionStep {
  StepKind kind;
  std::vector<Pair> consumed;
  std::vector<Pair> produced;
  std::vector<Vertex> bridges;  // gamma (and gamma') chosen for this step
};

// Record of one alignment run: output ties back to input through the merge
// script, one entry per consumed cross edge (u, u ^ e_coord), stored as u.
struct CompletionTrace {
  int dim = 1;
  int coord = 0;
  PairSet input;
  Matching matching;
  std::vector<CompletionStep> steps;
  PairSet output;
  std::vector<Vertex> merge_script;
};

// Applies the merge script to the output; the result must equal the input.
PairSet replay_merges(const CompletionTrace& t);

enum class CompletionMode { plain, enc_preserving, parity_targeted };

struct CompletionOptions {
  std::uint64_t seed = 0;
  CompletionMode mode = CompletionMode::plain;
  int target_side = 0;  // parity_targeted: side receiving the even pairs
};

struct CompletionResult {
  bool ok = false;
  CompletionTrace trace;
  StepKind stuck_step = StepKind::bridge_odd;
  std::string detail;
};

struct CompletionCounts {
  int k0 = 0;  // aligned odd pairs
  int k1 = 0;  // couples with all four endpoints on one side
  int k2 = 0;  // couples with a 3-1 split
  int predicted_size = 0;  // 2|A| - k0 - 2 k1 - k2
  bool guaranteed = false;
};
CompletionCounts completion_counts(const PairSet& a, int i, const Matching& r);

// Per-side tallies used by the parity-targeted count identities.
struct SideProfile {
  int m_o[2] = {0, 0};  // aligned odd pairs per side
  int m_e[2] = {0, 0};  // couples fully on one side
  int m_3[2] = {0, 0};  // couples with exactly three endpoints on the side
};
SideProfile side_profile(const PairSet& a, int i, const Matching& r);

CompletionResult complete(const PairSet& a, int i, const Matching& r,
                          const CompletionOptions& opt = {});
// Odd input whose sides both project without enclosed outside vertices;
// keeps both projections enclosure-free throughout.
CompletionResult complete_enc_preserving(const PairSet& a, int i,
                                         std::uint64_t seed = 0);
// Requires 2|A| <= 2^(n-2); routes all free couples' even pairs to side k.
CompletionResult complete_parity_targeted(const PairSet& a, int i,
                                          const Matching& r, int k,
                                          std::uint64_t seed = 0);

// Incremental driver, used by the solver to force specific bridge choices
// (hazard removal, edge-pair seeding) before finishing the rest.
class CompletionBuilder {
 public:
  CompletionBuilder(const PairSet& a, int i, Matching r,
                    std::uint64_t seed = 0);

  int coord() const { return coord_; }
  int dim() const { return input_.dim; }
  const PairSet& input() const { return input_; }
  const std::vector<int>& remaining() const { return remaining_; }
  const Pair& pair(int idx) const { return input_.pairs[idx]; }
  bool is_free(std::uint32_t bits) const { return !occupied_.count(bits); }

  // Step on an odd split pair with an explicit bridge vertex; gamma must sit
  // on the side of one endpoint, have the opposite parity, and be free
  // together with its cross neighbour.
  bool bridge_odd_pair(int idx, const Vertex& gamma);

  // Candidate bridge vertices for pair idx on the given side, optionally
  // filtered so both projections stay enclosure-free.
  std::vector<Vertex> bridge_candidates(int idx, int side, bool enc_safe);

  // Processes every remaining pair. Mode parity_targeted uses target_side.
  bool finish(CompletionMode mode, int target_side, std::string* why);

  bool enc_invariant_holds() const;  // both projections enclosure-free now
  StepKind stuck_kind() const { return stuck_kind_; }
  CompletionTrace take_trace();

 private:
  friend CompletionResult complete(const PairSet&, int, const Matching&,
                                   const CompletionOptions&);

  struct CoupleRef {
    int a, b;
  };

  bool occupy(const Vertex& gamma);
  std::vector<Vertex> admissible(int side, int chi_sign, bool enc_safe,
                                 std::uint64_t salt);
  bool enc_hazard(const Vertex& gamma) const;
  void push_step(StepKind kind, std::vector<Pair> consumed,
                 std::vector<Pair> produced, std::vector<Vertex> bridges);
  bool apply_keep_odd(int idx);
  bool apply_bridge_odd(int idx, bool enc_safe, std::string* why);
  bool apply_couple(const CoupleRef& c, CompletionMode mode, int target_side,
                    std::string* why);

  PairSet input_;
  int coord_;
  Matching matching_;
  std::mt19937_64 rng_;
  std::vector<int> remaining_;
  std::unordered_set<std::uint32_t> occupied_;
  std::unordered_set<std::uint32_t> side_proj_[2];  // projected occupancy
  std::vector<CompletionStep> steps_;
  std::vector<Pair> produced_;
  std::vector<Vertex> merge_script_;
  int produced_side_[2] = {0, 0};
  StepKind stuck_kind_ = StepKind::bridge_odd;
  bool finished_ = false;
};

}  // namespace cubepaths
