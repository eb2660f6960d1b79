#pragma once

// Seeded instance generation.
//
// generate_random draws from std::mt19937_64 seeded with `seed`, three
// outputs per edge in edge order: u = x0 mod n, v = x1 mod n, and the edge
// is negative iff (x2 >> 11) * 2^-53 < p. The output is therefore identical
// across platforms for a fixed seed.

#include <cstdint>
#include <functional>
#include <random>
#include <span>

#include "sigflow/circuits.hpp"
#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"

namespace sigflow {

SignedGraph generate_random(int vertices, int edges, double negative_probability,
                            std::uint64_t seed);

/// The subgraph of edges that lie on some signed circuit, with edges
/// renumbered in order and vertices kept. Always flow-admissible.
SignedGraph admissible_part(const SignedGraph& g, int max_edges = kDefaultEnumerationLimit);

/// Random integer flow built from characteristic flows of the given signed
/// circuits: balanced circuits with integer multipliers, bicircuits either
/// doubled or paired with another bicircuit over the same two circuits.
/// Values are bounded by max_abs in absolute value; the orientation is
/// random. May be the zero flow.
FlowAssignment random_integer_flow(const SignedGraph& g, std::span<const SignedCircuit> circuits,
                                   std::mt19937_64& rng, int max_abs);

/// Calls `visit` on every signed multigraph on `vertices` vertices with at
/// most `max_edges` edges, loops and parallel edges included. Each multiset
/// of (end, end, sign) triples is produced once; isomorphic copies are not
/// filtered.
void for_each_small_graph(int vertices, int max_edges,
                          const std::function<void(const SignedGraph&)>& visit);

}  // namespace sigflow
