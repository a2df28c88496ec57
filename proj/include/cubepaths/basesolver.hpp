#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubepaths/connector.hpp"
#include "cubepaths/pairset.hpp"

namespace cubepaths {

// Exhaustive mode (node_budget == 0) is the ground truth for n <= 5;
// a nonzero budget gives the best-effort mode usable at any dimension.
struct SearchLimits {
  std::uint64_t node_budget = 0;
};

enum class SearchStatus { found, non_connectable, budget_exceeded };

struct SearchOutcome {
  SearchStatus status = SearchStatus::budget_exceeded;
  Connector connector;
  std::uint64_t nodes = 0;
  std::uint64_t space_hash = 0;  // hash of (n, pair-set) identifying the run
};

// Backtracking search for a connector. Pruning: per-parity consumption
// accounting, dead free vertices, and free-region component feasibility.
// A non_connectable outcome is only produced in exhaustive mode.
SearchOutcome search_connector(const PairSet& a, const SearchLimits& limits = {},
                               std::uint64_t seed = 0);

struct CensusFilter {
  bool require_odd = false;
  bool require_balanced = false;
  bool require_pure = false;
  int size_min = 1;
  int size_max = 3;
  int edge_pairs_exact = -1;  // -1: no constraint
  int edge_pairs_min = -1;
  bool require_enc_empty = false;
};

struct CensusRecord {
  PairSet canonical;
  bool connectable = false;
  std::uint64_t orbit_size = 0;
  std::uint64_t nodes = 0;
  std::string certificate;  // "connector" or "exhaustion"
  Connector connector;      // valid when connectable
};

struct CensusSummary {
  std::vector<CensusRecord> records;  // sorted by canonical encoding
  std::uint64_t classes_total = 0;
  std::uint64_t classes_non_connectable = 0;
  std::uint64_t labeled_total = 0;
  std::uint64_t labeled_non_connectable = 0;
};

// One representative per isomorphism class matching the filter, each decided
// by exhaustive search. Full enumeration is supported for n <= 4; n = 5
// requires a filter with size_max <= 2 unless allow_large is set.
CensusSummary enumerate_classes(int dim, const CensusFilter& filter,
                                int threads = 1, bool allow_large = false);

}  // namespace cubepaths
