#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubepaths/basesolver.hpp"
#include "cubepaths/completion.hpp"
#include "cubepaths/connector.hpp"
#include "cubepaths/pairset.hpp"

namespace cubepaths {

enum class Verdict { connected, non_connectable, unresolved };

enum class Obstruction {
  none,
  empty_set,        // nothing to cover the cube with
  unbalanced,       // chi(A) != 0
  enclosed_vertex,  // odd set with enc(A) nonempty
  small_exception,  // the one non-connectable odd class of Q_4 at size 3
  exhausted,        // exhaustive search at n <= 5 ran dry
};

const char* verdict_name(Verdict v);
const char* obstruction_name(Obstruction o);

struct SolveConfig {
  std::uint64_t seed = 0x5eed;
  int completion_retries = 32;
  std::uint64_t fallback_nodes = 2'000'000;
  int threads = 1;
};

struct SolveStats {
  std::uint64_t completions_tried = 0;
  std::uint64_t completions_failed = 0;
  std::uint64_t subsolves = 0;
  std::uint64_t fallback_calls = 0;
  std::uint64_t search_nodes = 0;
  std::uint64_t verifications = 0;
  int max_depth = 0;
  std::vector<std::string> strategy_path;  // winning strategy per level
};

struct SolveReport {
  Verdict verdict = Verdict::unresolved;
  Obstruction obstruction = Obstruction::none;
  std::string reason;
  Connector connector;  // valid when connected (always re-verified)
  SolveStats stats;
};

// Decides connectability and constructs a verified connector. Guarantees
// cover odd inputs with |A| <= n-1 (plus the documented exceptions); other
// balanced inputs are answered best-effort, never unsoundly.
SolveReport solve(const PairSet& a, const SolveConfig& cfg = {});

// The sigma-concentrated strategies, callable directly.
//   concentrated_side: all but <= 2 pairs aligned on one side, other side empty
//   lone_minority_pair: |A| = n with exactly one aligned pair on the minority side
//   blocked_coordinate: the saturated configuration at a blocked coordinate
enum class SpecialCase { concentrated_side, lone_minority_pair, blocked_coordinate };
SolveReport special_case(const PairSet& a, SpecialCase which,
                         const SolveConfig& cfg = {});

// Hamiltonian path of Q_n from one vertex to another of opposite parity,
// produced by the same induction as the general solver.
Connector gray_path(int dim, const Vertex& from, const Vertex& to,
                    const SolveConfig& cfg = {});

// Lifts connectors of the two side projections of trace.output into the
// full cube and replays the merge script, yielding a connector of
// trace.input. c0 covers side 0, c1 side 1.
Connector stitch(const CompletionTrace& trace, const Connector& c0,
                 const Connector& c1);

}  // namespace cubepaths
