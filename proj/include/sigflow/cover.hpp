#pragma once

// Signed circuit covers: derived from a decomposition, checked against the
// multiplicity and total-length bounds, turned back into a nowhere-zero
// flow, and computed exactly on small graphs.

#include <cstdint>
#include <span>
#include <vector>

#include "sigflow/circuits.hpp"
#include "sigflow/decompose.hpp"
#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"

namespace sigflow {

struct Cover {
  std::vector<SignedCircuit> circuits;
  /// Number of member circuits containing each edge.
  std::vector<int> multiplicity;

  static Cover of(const SignedGraph& g, std::vector<SignedCircuit> circuits);

  /// Sum of member lengths; an edge counts once per member containing it.
  std::int64_t total_length() const;
  bool covers_all() const;
};

struct DerivedCover {
  Cover cover;
  /// Edges no term passes through. Nonempty exactly when the decomposed flow
  /// had zeros, in which case `cover` only covers the support.
  std::vector<EdgeId> uncovered;

  bool complete() const noexcept { return uncovered.empty(); }
};

/// Distinct terms of d as a cover of g.
DerivedCover cover_from_decomposition(const Decomposition& d, const SignedGraph& g);

/// Every edge lies in at most 2|f(e)| members.
bool check_multiplicity_bound(const Cover& cover, const FlowAssignment& f);

/// Total length is at most 2(k-1)|E(g)|.
bool check_length_bound(const Cover& cover, const SignedGraph& g, int k);

/// Sum over i = 1..r of 2^(2i-1) times the characteristic flow of the i-th
/// circuit, each oriented consistently on its own starting from the
/// canonical orientation; returned along the canonical orientation. Throws
/// InvalidArgument if the circuits miss an edge, LimitExceeded for more
/// than 30 circuits.
FlowAssignment flow_from_cover(std::span<const SignedCircuit> circuits, const SignedGraph& g);

inline constexpr int kDefaultExactCoverLimit = 12;

/// Cover of minimum total length by branch and bound over all signed
/// circuits. Throws NotFlowAdmissible if some edge lies on no signed
/// circuit, LimitExceeded above max_edges.
Cover shortest_cover_exact(const SignedGraph& g, int max_edges = kDefaultExactCoverLimit);

}  // namespace sigflow
