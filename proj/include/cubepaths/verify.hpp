#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubepaths/connector.hpp"
#include "cubepaths/pairset.hpp"

namespace cubepaths {

// Trusted checker. Deliberately simple, never calls solver code.

enum class ViolationClause {
  pairing,    // no bijection between pairs and paths via endpoints
  endpoint,   // a path's ends do not equal its pair (or degenerate/singleton mismatch)
  adjacency,  // consecutive vertices not at Hamming distance 1
  coverage,   // some vertex missing or visited twice
  malformed,  // empty path, wrong dimension, out-of-range vertex
};

struct Violation {
  ViolationClause clause;
  std::string detail;
  std::vector<Vertex> witnesses;
};

const char* violation_clause_name(ViolationClause c);

// Empty result means the connector is valid for the pair-set.
std::optional<Violation> check(const PairSet& a, const Connector& c);

// seq must visit every vertex of V_n exactly once with unit Hamming steps;
// cyclic additionally requires last-first adjacency.
std::optional<Violation> check_gray(int dim, const std::vector<Vertex>& seq,
                                    bool cyclic = false);
std::optional<Violation> check_gray_between(int dim, const std::vector<Vertex>& seq,
                                            const Vertex& from, const Vertex& to);

}  // namespace cubepaths
