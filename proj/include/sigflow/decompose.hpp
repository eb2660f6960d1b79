#pragma once

// Decomposition of an integer flow into positive integer multiples of
// characteristic flows of signed circuits, all consistently directed with
// respect to one positive orientation.
//
// The engine runs in two phases. Phase 1 peels consistently directed
// balanced circuits off the support, each with the largest coefficient that
// keeps the residual nonnegative. Phase 2 repeatedly builds a consistently
// directed unbalanced bicircuit, subtracts its characteristic flow once,
// and then resolves the fractional residue it leaves behind: a pair of
// edge-disjoint unbalanced circuits D, D' carrying the only non-integer
// values. Each fractional step subtracts one more bicircuit and leaves
// either an integer residual or a fresh fractional pair.
//
// Ties are broken by lowest edge id, then lowest slot.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sigflow/circuits.hpp"
#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"

namespace sigflow {

struct Term {
  ConsistentlyOriented circuit;
  std::int64_t coefficient = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Decomposition {
  /// The positive orientation every term is consistent with.
  Bidirection orientation;
  std::vector<Term> terms;
};

/// An unbalanced circuit in the residual, stored starting at its faulty
/// vertex.
struct FaultyCircuit {
  std::vector<Dart> darts;
  VertexId faulty = -1;
};

/// The two circuits carrying fractional residual values.
struct FractionalPair {
  FaultyCircuit first;
  FaultyCircuit second;
};

struct EngineState {
  /// Nonnegative residual, read along the fixed positive orientation.
  FlowAssignment residual;
  std::optional<FractionalPair> pair;
};

/// A consistently directed balanced circuit met where the argument rules
/// one out. The engine extracts it and restarts.
struct BalancedFound {
  std::vector<Dart> circuit;
};

enum class StepCase : std::uint8_t {
  shared_vertex,  // D and D' meet at their common faulty vertex
  case1,          // trail from d closes on itself
  case2_1,        // trail from d hits D' - d'; second trail from d' closes on itself
  case2_2,        // ... second trail hits the first trail
  case3,          // trail from d reaches d' consistently with D'
  case4_1,        // trail reaches d' inconsistently; second trail closes on itself
  case4_2,        // ... second trail hits the first trail
};

const char* to_string(StepCase c) noexcept;

/// Consistently directed balanced circuit inside the residual's support,
/// found by exhaustive search, or nullopt.
std::optional<std::vector<Dart>> find_consistent_balanced_circuit(const SignedGraph& g,
                                                                  const FlowAssignment& residual);

struct BalancedPhase {
  EngineState state;
  std::vector<Term> terms;
};

/// Removes consistently directed balanced circuits until none is left in
/// the support. Requires no fractional pair.
BalancedPhase extract_balanced_phase(const SignedGraph& g, EngineState state);

/// Follows consistent support darts from `start` until a vertex repeats and
/// returns the closed segment. Prefers a dart leaving `start`.
std::variant<FaultyCircuit, BalancedFound> find_unbalanced_circuit(const SignedGraph& g,
                                                                   const EngineState& state,
                                                                   VertexId start);

struct BicircuitStep {
  EngineState state;  // residual after subtracting the bicircuit once
  ConsistentlyOriented bicircuit;
  StepCase which = StepCase::case1;
};

/// Grows a consistent trail out of the faulty vertex of `unbalanced` until
/// it closes on itself and subtracts the resulting bicircuit.
std::variant<BicircuitStep, BalancedFound> build_bicircuit(const SignedGraph& g,
                                                           const EngineState& state,
                                                           const FaultyCircuit& unbalanced);

/// One fractional step: requires a fractional pair.
std::variant<BicircuitStep, BalancedFound> resolve_fractional_step(const SignedGraph& g,
                                                                   const EngineState& state);

struct ConditionCheck {
  std::int64_t step = 0;
  /// No consistently directed balanced circuit in the residual support.
  bool no_consistent_balanced = true;
  /// Every fractional residual value lies on the recorded pair.
  bool fractional_on_pair = true;
};

struct EngineReport {
  /// Times the balanced-circuit guard fired after phase 1 had finished.
  std::int64_t guard_hits = 0;
  std::int64_t steps = 0;
  std::vector<StepCase> cases;
  std::vector<ConditionCheck> conditions;
  std::vector<std::string> trace;
};

struct DecomposeOptions {
  /// Re-check both fractional-state conditions at every fractional step.
  bool check_conditions = true;
  bool trace = false;
};

/// Throws InvalidArgument if f is not an integer flow on g. Terms for the
/// same signed circuit are merged.
Decomposition decompose(const SignedGraph& g, const FlowAssignment& f,
                        const DecomposeOptions& options = {}, EngineReport* report = nullptr);

/// Recomputes the sum of coefficient times characteristic flow from scratch
/// and compares it with f read along d.orientation; also checks that the
/// orientation is positive for f and every term is consistent under it.
bool verify_decomposition(const SignedGraph& g, const FlowAssignment& f, const Decomposition& d);

}  // namespace sigflow
