#pragma once

// Signed multigraphs on half-edges (darts) and their bidirections.
//
// Every edge e owns the darts (e,0) and (e,1), attached to its two ends in
// insertion order. A loop has both darts at the same vertex. A bidirection
// stores one bit per dart: true when the half-edge points toward its
// endpoint. Edge direction is never stored separately.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sigflow/errors.hpp"

namespace sigflow {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

enum class Sign : std::uint8_t { positive, negative };

constexpr Sign flipped(Sign s) noexcept {
  return s == Sign::positive ? Sign::negative : Sign::positive;
}

constexpr char sign_char(Sign s) noexcept { return s == Sign::positive ? '+' : '-'; }

struct Dart {
  EdgeId edge = 0;
  int slot = 0;

  constexpr std::size_t index() const noexcept {
    return 2 * static_cast<std::size_t>(edge) + static_cast<std::size_t>(slot);
  }
  constexpr Dart partner() const noexcept { return {edge, slot ^ 1}; }

  friend constexpr auto operator<=>(const Dart&, const Dart&) = default;
};

struct Edge {
  std::array<VertexId, 2> ends{};
  Sign sign = Sign::positive;

  bool is_loop() const noexcept { return ends[0] == ends[1]; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

class SignedGraph {
 public:
  SignedGraph() = default;
  explicit SignedGraph(int vertex_count);

  int vertex_count() const noexcept { return static_cast<int>(incidence_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  /// Appends an edge; loops and parallel edges are allowed.
  EdgeId add_edge(VertexId u, VertexId v, Sign s);

  const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  Sign sign(EdgeId e) const { return edge(e).sign; }
  VertexId endpoint(Dart d) const { return edge(d.edge).ends[static_cast<std::size_t>(d.slot)]; }

  /// Darts at v, ordered by (edge id, slot).
  std::span<const Dart> darts_at(VertexId v) const;

  bool has_vertex(VertexId v) const noexcept { return v >= 0 && v < vertex_count(); }
  bool has_edge(EdgeId e) const noexcept { return e >= 0 && e < edge_count(); }

  /// Copy with the sign of one edge replaced. Incidence is unchanged.
  SignedGraph with_sign(EdgeId e, Sign s) const;

  friend bool operator==(const SignedGraph& a, const SignedGraph& b) {
    return a.edges_ == b.edges_ && a.vertex_count() == b.vertex_count();
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Dart>> incidence_;
};

/// Per-dart direction bits satisfying the sign-compatibility rule.
class Bidirection {
 public:
  Bidirection() = default;

  /// Canonical orientation bit 0 on every edge.
  static Bidirection canonical(const SignedGraph& g);
  /// Canonical orientation from one bit per edge. Bit 0 means dart 0 points
  /// away; for positive edges dart 1 then points toward, for negative edges
  /// both point away. Bit 1 is the reverse.
  static Bidirection from_bits(const SignedGraph& g, std::span<const std::uint8_t> bits);
  /// Raw per-dart bits; throws if they violate compatibility for g.
  static Bidirection from_darts(const SignedGraph& g, std::vector<std::uint8_t> toward);

  bool toward(Dart d) const { return toward_.at(d.index()) != 0; }
  /// Canonical orientation bit of an edge (the direction bit of dart 0).
  int bit(EdgeId e) const { return toward(Dart{e, 0}) ? 1 : 0; }
  std::size_t edge_count() const noexcept { return toward_.size() / 2; }

  bool compatible_with(const SignedGraph& g) const;

  friend bool operator==(const Bidirection&, const Bidirection&) = default;

 private:
  friend Bidirection reverse_edge(const Bidirection&, EdgeId);
  friend std::pair<SignedGraph, Bidirection> switch_vertex(const SignedGraph&,
                                                          const Bidirection&, VertexId);
  std::vector<std::uint8_t> toward_;
};

/// Flips both darts of e.
Bidirection reverse_edge(const Bidirection& w, EdgeId e);

/// Flips every dart at v and toggles the sign of each non-loop edge with
/// exactly one end at v.
std::pair<SignedGraph, Bidirection> switch_vertex(const SignedGraph& g, const Bidirection& w,
                                                  VertexId v);

/// Walks `a` then `b` through their shared vertex: consistent iff exactly one
/// of the arrival dart and the departure dart points toward the vertex.
inline bool consistent_at(const Bidirection& w, Dart arrival, Dart departure) {
  return w.toward(arrival) != w.toward(departure);
}

enum class Balance : std::uint8_t { balanced, unbalanced };

/// Departure darts of the circuit traced by `edges`, or nullopt when the
/// sequence is not a circuit (closed walk on distinct vertices and edges).
std::optional<std::vector<Dart>> trace_circuit(const SignedGraph& g,
                                               std::span<const EdgeId> edges);

/// Same check on a dart sequence: each dart leaves the vertex the previous
/// one arrived at, the walk closes, and vertices and edges are distinct.
bool is_circuit(const SignedGraph& g, std::span<const Dart> darts);

/// Vertex each dart departs from.
std::vector<VertexId> departure_vertices(const SignedGraph& g, std::span<const Dart> darts);

/// Balanced iff the circuit has an even number of negative edges.
Balance circuit_balance(const SignedGraph& g, std::span<const EdgeId> edges);
Balance circuit_balance(const SignedGraph& g, std::span<const Dart> darts);

}  // namespace sigflow
