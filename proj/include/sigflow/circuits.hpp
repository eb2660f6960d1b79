#pragma once

// Signed circuits: balanced circuits and unbalanced bicircuits.
//
// A circuit is a cyclic sequence of departure darts: dart i leaves vertex
// v_i along its edge and arrives at v_{i+1} through the partner dart. A
// bicircuit is two unbalanced circuits plus a connecting path (possibly
// empty, in which case the circuits share one vertex).

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"

namespace sigflow {

enum class CircuitKind : std::uint8_t { balanced, bicircuit };

/// Canonical form: each circuit starts at its smallest edge id and runs in
/// the direction of the smaller second edge id (loops and digons leave
/// through slot 0 of that edge); the bicircuit's first circuit holds the
/// smaller edge id and the path runs from it to the second circuit.
struct SignedCircuit {
  CircuitKind kind = CircuitKind::balanced;
  std::vector<Dart> cycle;
  std::vector<Dart> path;
  std::vector<Dart> second;
  /// Path ends on `cycle` and `second`; both equal the shared vertex when
  /// the path is empty. Unused (-1) for balanced circuits.
  std::array<VertexId, 2> attachment{-1, -1};

  bool is_balanced() const noexcept { return kind == CircuitKind::balanced; }
  /// Every edge of the signed circuit, ascending.
  std::vector<EdgeId> edges() const;

  friend auto operator<=>(const SignedCircuit&, const SignedCircuit&) = default;
};

/// Number of edges, each counted once.
int circuit_length(const SignedCircuit& c);

/// Rotation/reflection-canonical form of a circuit's dart sequence.
std::vector<Dart> canonical_cycle(std::span<const Dart> darts);
/// Same circuit starting at vertex v (v must lie on it), same direction.
std::vector<Dart> rotate_to(const SignedGraph& g, std::span<const Dart> darts, VertexId v);
/// The path walked backwards.
std::vector<Dart> reversed_path(std::span<const Dart> darts);

/// Reason the structure is not a signed circuit of g, or nullopt if it is.
std::optional<std::string> structural_error(const SignedGraph& g, const SignedCircuit& c);

/// Validates and canonicalizes. Throws InvalidArgument on bad structure.
SignedCircuit make_balanced_circuit(const SignedGraph& g, std::span<const Dart> darts);
SignedCircuit make_bicircuit(const SignedGraph& g, std::span<const Dart> first,
                             std::span<const Dart> path, std::span<const Dart> second);
/// Edge-list forms; traversal darts are reconstructed from incidence.
SignedCircuit balanced_from_edges(const SignedGraph& g, std::span<const EdgeId> edges);
SignedCircuit bicircuit_from_edges(const SignedGraph& g, std::span<const EdgeId> first,
                                   std::span<const EdgeId> path, std::span<const EdgeId> second);

struct ConsistencyVerdict {
  bool ok = false;
  std::vector<VertexId> faulty;        // set when ok
  std::optional<VertexId> violation;   // set when not ok
};

/// Plain circuit: ok when at most one vertex is inconsistent; that vertex
/// is then the faulty one (it exists iff the circuit is unbalanced).
ConsistencyVerdict check_circuit_consistent(const SignedGraph& g, const Bidirection& w,
                                            std::span<const Dart> darts);

/// Signed circuit: balanced circuits must be consistent everywhere; a
/// bicircuit may be inconsistent only between the two edges of one of its
/// circuits at a path end. Throws InvalidArgument on bad structure.
ConsistencyVerdict check_consistent(const SignedGraph& g, const Bidirection& w,
                                    const SignedCircuit& c);

struct ConsistentlyOriented {
  SignedCircuit circuit;
  Bidirection orientation;
  std::vector<VertexId> faulty;

  friend bool operator==(const ConsistentlyOriented&, const ConsistentlyOriented&) = default;
};

/// Reverses edges of c (never others) until c is consistent. The first
/// edge of c's representation keeps its direction in w.
ConsistentlyOriented orient_consistently(const SignedGraph& g, const Bidirection& w,
                                         const SignedCircuit& c);

/// 1 on balanced-circuit and path edges, 1/2 on bicircuit circuit edges,
/// 0 elsewhere; read along co.orientation.
FlowAssignment characteristic_flow(const ConsistentlyOriented& co, const SignedGraph& ambient);

inline constexpr int kDefaultEnumerationLimit = 16;

/// All circuits of g in canonical form.
std::vector<std::vector<Dart>> enumerate_circuits(const SignedGraph& g,
                                                  int max_edges = kDefaultEnumerationLimit);

/// All balanced circuits, then all unbalanced bicircuits, each once.
/// Exponential; throws LimitExceeded above max_edges.
std::vector<SignedCircuit> enumerate_signed_circuits(const SignedGraph& g,
                                                     int max_edges = kDefaultEnumerationLimit);

}  // namespace sigflow
