#pragma once

// Brute-force oracles: nowhere-zero k-flows, flow number, admissibility.

#include <cstdint>
#include <optional>

#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"

namespace sigflow {

struct SearchLimits {
  int max_k = 6;
  std::int64_t node_budget = 200'000'000;
  double time_budget_seconds = 120.0;
  int max_edges = 40;
};

/// A flow along the canonical orientation with every value in
/// {+-1, ..., +-(k-1)}, or nullopt when exhaustive backtracking finds none.
/// Throws BudgetExceeded when the node or time budget runs out first.
std::optional<FlowAssignment> find_nowhere_zero_k_flow(const SignedGraph& g, int k,
                                                       const SearchLimits& limits = {});

/// Every edge lies on some signed circuit.
bool is_flow_admissible(const SignedGraph& g, int max_edges = 16);

/// Smallest k <= limits.max_k admitting a nowhere-zero k-flow.
std::optional<int> flow_number(const SignedGraph& g, const SearchLimits& limits = {});

}  // namespace sigflow
