#include "sigflow/decompose.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace sigflow {

const char* to_string(StepCase c) noexcept {
  switch (c) {
    case StepCase::shared_vertex: return "shared-vertex";
    case StepCase::case1: return "case-1";
    case StepCase::case2_1: return "case-2.1";
    case StepCase::case2_2: return "case-2.2";
    case StepCase::case3: return "case-3";
    case StepCase::case4_1: return "case-4.1";
    case StepCase::case4_2: return "case-4.2";
  }
  return "?";
}

namespace {

bool in_support(const FlowAssignment& r, EdgeId e) { return r[e].doubled() > 0; }

/// Lowest support dart at v whose direction bit equals `toward`.
std::optional<Dart> support_dart(const SignedGraph& g, const FlowAssignment& r, VertexId v,
                                 bool toward) {
  for (const Dart d : g.darts_at(v)) {
    if (in_support(r, d.edge) && r.orientation.toward(d) == toward) return d;
  }
  return std::nullopt;
}

struct Trail {
  std::vector<Dart> darts;
  std::vector<VertexId> vertices;  // vertices[i] is where darts[i] departs; back() is the end

  VertexId terminal() const { return vertices.back(); }

  /// Index of the earlier occurrence of the terminal vertex, if any.
  std::optional<std::size_t> revisit() const {
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      if (vertices[i] == vertices.back()) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> position(VertexId v) const {
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      if (vertices[i] == v) return i;
    }
    return std::nullopt;
  }
};

// Leaves through `first`, then keeps taking the lowest support dart that is
// consistent with the arrival dart, until the walk returns to one of its
// own vertices or arrives at a vertex satisfying `stop`.
Trail grow_trail(const SignedGraph& g, const FlowAssignment& r, Dart first,
                 const std::function<bool(VertexId)>& stop) {
  Trail t;
  t.vertices.push_back(g.endpoint(first));
  Dart d = first;
  for (;;) {
    t.darts.push_back(d);
    const VertexId w = g.endpoint(d.partner());
    const bool seen = std::ranges::find(t.vertices, w) != t.vertices.end();
    t.vertices.push_back(w);
    if (seen || stop(w)) return t;
    const auto next = support_dart(g, r, w, !r.orientation.toward(d.partner()));
    if (!next) throw InternalError("trail is stuck: residual violates Kirchhoff's law");
    d = *next;
  }
}

std::vector<VertexId> vertex_set(const SignedGraph& g, std::span<const Dart> darts) {
  auto v = departure_vertices(g, darts);
  std::ranges::sort(v);
  return v;
}

bool has(const std::vector<VertexId>& sorted, VertexId v) {
  return std::ranges::binary_search(sorted, v);
}

std::vector<Dart> slice(const std::vector<Dart>& v, std::size_t from, std::size_t to) {
  return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to)};
}

bool closes_consistently(const Bidirection& w, std::span<const Dart> circuit) {
  return consistent_at(w, circuit.back().partner(), circuit.front());
}

ConsistentlyOriented require_consistent(const SignedGraph& g, const Bidirection& w,
                                        const SignedCircuit& c) {
  auto verdict = check_consistent(g, w, c);
  if (!verdict.ok) {
    throw InternalError("constructed signed circuit is not consistently directed (vertex " +
                        std::to_string(*verdict.violation) + ")");
  }
  return ConsistentlyOriented{c, w, std::move(verdict.faulty)};
}

FlowAssignment subtract_checked(const FlowAssignment& r, const FlowAssignment& chi) {
  FlowAssignment out = flow_subtract(r, chi);
  for (const HalfInt v : out.values) {
    if (v < HalfInt{}) throw InternalError("subtraction drove the residual negative");
  }
  return out;
}

BicircuitStep finish(const SignedGraph& g, const EngineState& state, const SignedCircuit& u,
                     std::optional<FractionalPair> pair, StepCase which) {
  auto co = require_consistent(g, state.residual.orientation, u);
  BicircuitStep step;
  step.state.residual = subtract_checked(state.residual, characteristic_flow(co, g));
  step.state.pair = std::move(pair);
  step.bicircuit = std::move(co);
  step.which = which;
  return step;
}

// The segment of circuit `c` (stored from its faulty vertex) that runs from
// `t` back to the faulty vertex and is consistent with `arrival` at t.
std::vector<Dart> segment_to_faulty(const SignedGraph& g, const Bidirection& w,
                                    const std::vector<Dart>& c, VertexId t, Dart arrival) {
  std::size_t j = 0;
  while (j < c.size() && g.endpoint(c[j]) != t) ++j;
  if (j == 0 || j == c.size()) throw InternalError("segment_to_faulty: vertex not inside circuit");
  std::vector<Dart> forward = slice(c, j, c.size());
  std::vector<Dart> backward = reversed_path(slice(c, 0, j));
  return consistent_at(w, arrival, forward.front()) ? forward : backward;
}

std::string edge_list(const SignedCircuit& c) {
  std::ostringstream os;
  const auto e = c.edges();
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  return os.str();
}

}  // namespace

std::optional<std::vector<Dart>> find_consistent_balanced_circuit(const SignedGraph& g,
                                                                  const FlowAssignment& r) {
  const Bidirection& w = r.orientation;
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<Dart> path;
  VertexId home = -1;

  // Extends `path` from v; every inner vertex is larger than `home`.
  auto extend = [&](auto&& self, VertexId v) -> bool {
    const Dart arrival = path.back().partner();
    for (const Dart d : g.darts_at(v)) {
      if (!in_support(r, d.edge) || !consistent_at(w, arrival, d)) continue;
      const VertexId next = g.endpoint(d.partner());
      if (next == home) {
        if (consistent_at(w, d.partner(), path.front())) {
          path.push_back(d);
          return true;
        }
      } else if (next > home && !visited[static_cast<std::size_t>(next)]) {
        visited[static_cast<std::size_t>(next)] = 1;
        path.push_back(d);
        if (self(self, next)) return true;
        path.pop_back();
        visited[static_cast<std::size_t>(next)] = 0;
      }
    }
    return false;
  };

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!in_support(r, e)) continue;
    for (int slot = 0; slot < 2; ++slot) {
      const Dart d0{e, slot};
      home = g.endpoint(d0);
      const VertexId next = g.endpoint(d0.partner());
      path.assign({d0});
      if (next == home) {
        if (consistent_at(w, d0.partner(), d0)) return path;
        continue;
      }
      if (next < home) continue;
      std::ranges::fill(visited, 0);
      visited[static_cast<std::size_t>(home)] = 1;
      visited[static_cast<std::size_t>(next)] = 1;
      if (extend(extend, next)) return path;
    }
  }
  return std::nullopt;
}

BalancedPhase extract_balanced_phase(const SignedGraph& g, EngineState state) {
  if (state.pair) throw InvalidArgument("extract_balanced_phase: state has a fractional pair");
  BalancedPhase out;
  while (auto circuit = find_consistent_balanced_circuit(g, state.residual)) {
    std::int64_t least = INT64_MAX;
    for (const Dart d : *circuit) least = std::min(least, state.residual[d.edge].doubled());
    const std::int64_t coefficient = least / 2;
    if (coefficient <= 0) throw InternalError("balanced circuit through a fractional value");
    auto co = require_consistent(g, state.residual.orientation, make_balanced_circuit(g, *circuit));
    state.residual =
        subtract_checked(state.residual, flow_scale(characteristic_flow(co, g), coefficient));
    out.terms.push_back(Term{std::move(co), coefficient});
  }
  out.state = std::move(state);
  return out;
}

std::variant<FaultyCircuit, BalancedFound> find_unbalanced_circuit(const SignedGraph& g,
                                                                   const EngineState& state,
                                                                   VertexId start) {
  const FlowAssignment& r = state.residual;
  auto first = support_dart(g, r, start, false);
  if (!first) first = support_dart(g, r, start, true);
  if (!first) throw InvalidArgument("find_unbalanced_circuit: start vertex is outside the support");

  const Trail t = grow_trail(g, r, *first, [](VertexId) { return false; });
  const std::size_t from = *t.revisit();
  std::vector<Dart> circuit = slice(t.darts, from, t.darts.size());
  if (closes_consistently(r.orientation, circuit)) return BalancedFound{std::move(circuit)};
  return FaultyCircuit{std::move(circuit), t.terminal()};
}

std::variant<BicircuitStep, BalancedFound> build_bicircuit(const SignedGraph& g,
                                                           const EngineState& state,
                                                           const FaultyCircuit& unbalanced) {
  const FlowAssignment& r = state.residual;
  const Bidirection& w = r.orientation;
  const auto& circuit = unbalanced.darts;
  const VertexId u = unbalanced.faulty;
  if (circuit.empty() || g.endpoint(circuit.front()) != u) {
    throw InvalidArgument("build_bicircuit: circuit must start at its faulty vertex");
  }
  const auto on_circuit = vertex_set(g, circuit);

  // Consistent at u with both circuit edges.
  const auto first = support_dart(g, r, u, !w.toward(circuit.front()));
  if (!first) throw InternalError("no edge leaves the faulty vertex: Kirchhoff's law fails");
  const Trail t = grow_trail(g, r, *first, [&](VertexId v) { return has(on_circuit, v); });

  if (const auto m = t.revisit()) {
    std::vector<Dart> closing = slice(t.darts, *m, t.darts.size());
    if (closes_consistently(w, closing)) return BalancedFound{std::move(closing)};
    const std::vector<Dart> path = slice(t.darts, 0, *m);
    const SignedCircuit bic = make_bicircuit(g, circuit, path, closing);
    FractionalPair pair{unbalanced, FaultyCircuit{std::move(closing), t.terminal()}};
    return finish(g, state, bic, std::move(pair), StepCase::case1);
  }
  // The trail re-entered the circuit away from u: trail plus one of the two
  // circuit segments back to u is a consistent balanced circuit.
  std::vector<Dart> balanced = t.darts;
  const auto back = segment_to_faulty(g, w, circuit, t.terminal(), t.darts.back().partner());
  balanced.insert(balanced.end(), back.begin(), back.end());
  return BalancedFound{std::move(balanced)};
}

std::variant<BicircuitStep, BalancedFound> resolve_fractional_step(const SignedGraph& g,
                                                                   const EngineState& state) {
  if (!state.pair) throw InvalidArgument("resolve_fractional_step: no fractional pair");
  const FlowAssignment& r = state.residual;
  const Bidirection& w = r.orientation;
  const FaultyCircuit& dc = state.pair->first;
  const FaultyCircuit& dc2 = state.pair->second;
  const VertexId d = dc.faulty;
  const VertexId d2 = dc2.faulty;
  const auto on_d = vertex_set(g, dc.darts);
  const auto on_d2 = vertex_set(g, dc2.darts);

  std::vector<VertexId> common;
  std::ranges::set_intersection(on_d, on_d2, std::back_inserter(common));
  if (!common.empty()) {
    if (common.size() != 1 || d != d2 || common[0] != d) {
      throw InternalError("fractional circuits meet away from their faulty vertices");
    }
    // Trivial trail: D and D' already form a bicircuit at the shared vertex.
    const SignedCircuit u = make_bicircuit(g, dc.darts, {}, dc2.darts);
    return finish(g, state, u, std::nullopt, StepCase::shared_vertex);
  }

  auto guard = [&]() -> std::variant<BicircuitStep, BalancedFound> {
    auto found = find_consistent_balanced_circuit(g, r);
    if (!found) throw InternalError("fractional step contradiction without a balanced circuit");
    return BalancedFound{std::move(*found)};
  };

  const auto first = support_dart(g, r, d, !w.toward(dc.darts.front()));
  if (!first) throw InternalError("no edge leaves d: Kirchhoff's law fails");
  const Trail t = grow_trail(g, r, *first,
                             [&](VertexId v) { return has(on_d, v) || has(on_d2, v); });
  const VertexId end = t.terminal();

  if (const auto m = t.revisit()) {
    std::vector<Dart> closing = slice(t.darts, *m, t.darts.size());
    if (closes_consistently(w, closing)) return guard();
    const SignedCircuit u = make_bicircuit(g, dc.darts, slice(t.darts, 0, *m), closing);
    FractionalPair pair{dc2, FaultyCircuit{std::move(closing), end}};
    return finish(g, state, u, std::move(pair), StepCase::case1);
  }
  if (has(on_d, end)) return guard();

  const bool reached_d2 = end == d2;
  if (reached_d2 && consistent_at(w, t.darts.back().partner(), dc2.darts.front())) {
    return finish(g, state, make_bicircuit(g, dc.darts, t.darts, dc2.darts), std::nullopt,
                  StepCase::case3);
  }

  // Cases 2 and 4: a second trail out of d', consistent there with D'.
  const auto first2 = support_dart(g, r, d2, !w.toward(dc2.darts.front()));
  if (!first2) throw InternalError("no edge leaves d': Kirchhoff's law fails");
  const auto on_t = [&](VertexId v) { return std::ranges::find(t.vertices, v) != t.vertices.end(); };
  const Trail t2 = grow_trail(g, r, *first2, [&](VertexId v) {
    return has(on_d, v) || has(on_d2, v) || on_t(v);
  });
  const VertexId end2 = t2.terminal();

  if (const auto m = t2.revisit()) {
    std::vector<Dart> closing = slice(t2.darts, *m, t2.darts.size());
    if (closes_consistently(w, closing)) return guard();
    const SignedCircuit u = make_bicircuit(g, dc2.darts, slice(t2.darts, 0, *m), closing);
    FractionalPair pair{dc, FaultyCircuit{std::move(closing), end2}};
    return finish(g, state, u, std::move(pair),
                  reached_d2 ? StepCase::case4_1 : StepCase::case2_1);
  }
  const auto p = t.position(end2);
  if (!p) return guard();
  // end2 splits the first trail into W1 (from d) and W2; the second trail
  // must arrive inconsistently with W2's first edge.
  if (consistent_at(w, t2.darts.back().partner(), t.darts[*p])) return guard();
  std::vector<Dart> path = slice(t.darts, 0, *p);
  const auto back = reversed_path(t2.darts);
  path.insert(path.end(), back.begin(), back.end());
  return finish(g, state, make_bicircuit(g, dc.darts, path, dc2.darts), std::nullopt,
                reached_d2 ? StepCase::case4_2 : StepCase::case2_2);
}

namespace {

class Engine {
 public:
  Engine(const SignedGraph& g, const DecomposeOptions& options, EngineReport& report)
      : g_(g), options_(options), report_(report) {}

  std::vector<Term> run(EngineState state) {
    const std::int64_t budget = state.residual.total_doubled() + 1;
    auto phase1 = extract_balanced_phase(g_, std::move(state));
    for (auto& term : phase1.terms) record(std::move(term), "B", nullptr, phase1.state);
    state = std::move(phase1.state);

    while (!support(state.residual).empty()) {
      tick(budget);
      const VertexId start = start_vertex(state.residual);
      auto found = find_unbalanced_circuit(g_, state, start);
      if (auto* b = std::get_if<BalancedFound>(&found)) {
        state = extract_guarded(std::move(state), b->circuit);
        continue;
      }
      auto built = build_bicircuit(g_, state, std::get<FaultyCircuit>(found));
      if (auto* b = std::get_if<BalancedFound>(&built)) {
        state = extract_guarded(std::move(state), b->circuit);
        continue;
      }
      state = take(std::get<BicircuitStep>(std::move(built)), /*first=*/true);

      while (state.pair) {
        tick(budget);
        if (options_.check_conditions) check_conditions(state);
        auto step = resolve_fractional_step(g_, state);
        if (auto* b = std::get_if<BalancedFound>(&step)) {
          state = extract_guarded(std::move(state), b->circuit);
          continue;
        }
        state = take(std::get<BicircuitStep>(std::move(step)), /*first=*/false);
      }
    }
    return std::move(terms_);
  }

 private:
  void tick(std::int64_t budget) {
    if (++report_.steps > budget) throw InternalError("decomposition failed to make progress");
  }

  // Lowest-id edge with a dart pointing away from its endpoint.
  VertexId start_vertex(const FlowAssignment& r) const {
    for (EdgeId e = 0; e < g_.edge_count(); ++e) {
      if (!in_support(r, e)) continue;
      for (int slot = 0; slot < 2; ++slot) {
        if (!r.orientation.toward(Dart{e, slot})) return g_.endpoint(Dart{e, slot});
      }
    }
    throw InternalError("nonzero residual with every support dart pointing inward");
  }

  EngineState take(BicircuitStep step, bool first) {
    if (!first) report_.cases.push_back(step.which);
    record(Term{std::move(step.bicircuit), 1}, "U", first ? nullptr : to_string(step.which),
           step.state);
    return std::move(step.state);
  }

  EngineState extract_guarded(EngineState state, const std::vector<Dart>& circuit) {
    ++report_.guard_hits;
    const auto verdict = check_circuit_consistent(g_, state.residual.orientation, circuit);
    if (!verdict.ok || !verdict.faulty.empty()) {
      throw InternalError("guard produced a circuit that is not consistently directed");
    }
    std::int64_t least = INT64_MAX;
    for (const Dart d : circuit) least = std::min(least, state.residual[d.edge].doubled());
    if (least / 2 <= 0) throw InternalError("guarded balanced circuit carries a fractional value");
    auto co = require_consistent(g_, state.residual.orientation, make_balanced_circuit(g_, circuit));
    state.residual =
        subtract_checked(state.residual, flow_scale(characteristic_flow(co, g_), least / 2));
    record(Term{std::move(co), least / 2}, "B", "guard", state);
    return state;
  }

  void check_conditions(const EngineState& state) {
    ConditionCheck check;
    check.step = report_.steps;
    check.no_consistent_balanced = !find_consistent_balanced_circuit(g_, state.residual);

    const auto& pair = *state.pair;
    std::vector<EdgeId> on_pair;
    for (const auto* c : {&pair.first, &pair.second}) {
      const auto verdict = check_circuit_consistent(g_, state.residual.orientation, c->darts);
      if (!verdict.ok || verdict.faulty != std::vector<VertexId>{c->faulty}) {
        check.fractional_on_pair = false;
      }
      for (const Dart d : c->darts) on_pair.push_back(d.edge);
    }
    std::ranges::sort(on_pair);
    if (std::ranges::adjacent_find(on_pair) != on_pair.end()) check.fractional_on_pair = false;
    std::vector<EdgeId> fractional;
    for (EdgeId e = 0; e < g_.edge_count(); ++e) {
      if (state.residual[e].is_fractional()) fractional.push_back(e);
    }
    if (fractional != on_pair) check.fractional_on_pair = false;

    report_.conditions.push_back(check);
    if (!check.no_consistent_balanced || !check.fractional_on_pair) {
      throw InternalError("fractional state violates its invariants at step " +
                          std::to_string(check.step));
    }
  }

  void record(Term term, const char* kind, const char* note, const EngineState& after) {
    if (options_.trace) {
      std::ostringstream os;
      os << kind;
      if (note) os << ' ' << note;
      os << " coeff=" << term.coefficient << " edges=" << edge_list(term.circuit.circuit)
         << " residual=" << after.residual.total_doubled();
      report_.trace.push_back(os.str());
    }
    terms_.push_back(std::move(term));
  }

  const SignedGraph& g_;
  const DecomposeOptions& options_;
  EngineReport& report_;
  std::vector<Term> terms_;
};

}  // namespace

Decomposition decompose(const SignedGraph& g, const FlowAssignment& f,
                        const DecomposeOptions& options, EngineReport* report) {
  if (!verify_flow(g, f)) throw InvalidArgument("decompose: input is not a flow");
  if (!f.is_integer()) throw InvalidArgument("decompose: input flow is not integer-valued");

  EngineReport local;
  EngineReport& rep = report ? *report : local;
  const FlowAssignment positive = positively_orient(g, f);
  auto raw = Engine(g, options, rep).run(EngineState{positive, std::nullopt});

  Decomposition d{positive.orientation, {}};
  std::map<SignedCircuit, std::size_t> index;
  for (auto& term : raw) {
    auto [it, fresh] = index.try_emplace(term.circuit.circuit, d.terms.size());
    if (fresh) {
      d.terms.push_back(std::move(term));
    } else {
      d.terms[it->second].coefficient += term.coefficient;
    }
  }
  return d;
}

bool verify_decomposition(const SignedGraph& g, const FlowAssignment& f, const Decomposition& d) {
  const auto m = static_cast<std::size_t>(g.edge_count());
  if (f.values.size() != m || f.orientation.edge_count() != m) return false;
  if (!d.orientation.compatible_with(g) || !f.orientation.compatible_with(g)) return false;

  const FlowAssignment target = reorient(f, d.orientation);
  for (const HalfInt v : target.values) {
    if (v < HalfInt{}) return false;
  }

  FlowAssignment sum = FlowAssignment::zero(g, d.orientation);
  for (const Term& term : d.terms) {
    if (term.coefficient <= 0) return false;
    const SignedCircuit& c = term.circuit.circuit;
    if (structural_error(g, c)) return false;
    for (const EdgeId e : c.edges()) {
      if (term.circuit.orientation.edge_count() != m ||
          term.circuit.orientation.bit(e) != d.orientation.bit(e)) {
        return false;
      }
    }
    const auto verdict = check_consistent(g, d.orientation, c);
    if (!verdict.ok) return false;
    const ConsistentlyOriented fresh{c, d.orientation, verdict.faulty};
    sum = flow_add(sum, flow_scale(characteristic_flow(fresh, g), term.coefficient));
  }
  return sum.values == target.values;
}

}  // namespace sigflow
