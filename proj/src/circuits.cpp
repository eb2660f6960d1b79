#include "sigflow/circuits.hpp"

#include <algorithm>
#include <set>

namespace sigflow {

namespace {

std::vector<VertexId> sorted_vertices(const SignedGraph& g, std::span<const Dart> darts) {
  auto v = departure_vertices(g, darts);
  std::ranges::sort(v);
  return v;
}

bool contains(const std::vector<VertexId>& sorted, VertexId v) {
  return std::ranges::binary_search(sorted, v);
}

EdgeId min_edge(std::span<const Dart> darts) {
  EdgeId m = darts.front().edge;
  for (const Dart d : darts) m = std::min(m, d.edge);
  return m;
}

std::vector<VertexId> intersection(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::ranges::set_intersection(a, b, std::back_inserter(out));
  return out;
}

Bidirection with_dart_direction(const Bidirection& w, Dart d, bool toward) {
  return w.toward(d) == toward ? w : reverse_edge(w, d.edge);
}

// Directs the circuit starting at darts[0] (kept as `first_toward`) so every
// vertex except the start is consistent.
Bidirection direct_cycle(Bidirection w, std::span<const Dart> darts, bool first_toward) {
  w = with_dart_direction(w, darts[0], first_toward);
  for (std::size_t i = 1; i < darts.size(); ++i) {
    w = with_dart_direction(w, darts[i], !w.toward(darts[i - 1].partner()));
  }
  return w;
}

Bidirection direct_path(Bidirection w, std::span<const Dart> darts, bool first_toward) {
  if (darts.empty()) return w;
  return direct_cycle(std::move(w), darts, first_toward);
}

// First vertex where a required-consistent pair of the circuit fails,
// skipping `exempt`.
std::optional<VertexId> cycle_violation(const SignedGraph& g, const Bidirection& w,
                                        std::span<const Dart> darts, VertexId exempt) {
  const std::size_t k = darts.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Dart arrival = darts[(i + k - 1) % k].partner();
    const VertexId v = g.endpoint(darts[i]);
    if (v == exempt) continue;
    if (!consistent_at(w, arrival, darts[i])) return v;
  }
  return std::nullopt;
}

// Both darts of the circuit at vertex v (departure and arrival).
std::array<Dart, 2> cycle_darts_at(const SignedGraph& g, std::span<const Dart> darts, VertexId v) {
  const std::size_t k = darts.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (g.endpoint(darts[i]) == v) return {darts[i], darts[(i + k - 1) % k].partner()};
  }
  throw InvalidArgument("vertex not on circuit");
}

}  // namespace

std::vector<EdgeId> SignedCircuit::edges() const {
  std::vector<EdgeId> out;
  for (const auto* part : {&cycle, &path, &second}) {
    for (const Dart d : *part) out.push_back(d.edge);
  }
  std::ranges::sort(out);
  return out;
}

int circuit_length(const SignedCircuit& c) {
  return static_cast<int>(c.cycle.size() + c.path.size() + c.second.size());
}

std::vector<Dart> reversed_path(std::span<const Dart> darts) {
  std::vector<Dart> out;
  out.reserve(darts.size());
  for (auto it = darts.rbegin(); it != darts.rend(); ++it) out.push_back(it->partner());
  return out;
}

std::vector<Dart> canonical_cycle(std::span<const Dart> darts) {
  if (darts.empty()) return {};
  const std::size_t k = darts.size();
  const EdgeId m = min_edge(darts);
  std::size_t at = 0;
  while (darts[at].edge != m) ++at;

  std::vector<Dart> forward;
  std::vector<Dart> backward;
  for (std::size_t i = 0; i < k; ++i) {
    forward.push_back(darts[(at + i) % k]);
    backward.push_back(darts[(at + k - i) % k].partner());
  }
  if (k >= 3) return forward[1].edge < backward[1].edge ? forward : backward;
  return forward[0].slot == 0 ? forward : backward;
}

std::vector<Dart> rotate_to(const SignedGraph& g, std::span<const Dart> darts, VertexId v) {
  const std::size_t k = darts.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (g.endpoint(darts[i]) != v) continue;
    std::vector<Dart> out;
    for (std::size_t j = 0; j < k; ++j) out.push_back(darts[(i + j) % k]);
    return out;
  }
  throw InvalidArgument("rotate_to: vertex not on circuit");
}

std::optional<std::string> structural_error(const SignedGraph& g, const SignedCircuit& c) {
  if (!is_circuit(g, c.cycle)) return "first circuit is not a circuit";
  if (c.kind == CircuitKind::balanced) {
    if (!c.path.empty() || !c.second.empty()) return "balanced circuit carries bicircuit parts";
    if (circuit_balance(g, std::span<const Dart>(c.cycle)) != Balance::balanced) {
      return "circuit is unbalanced";
    }
    return std::nullopt;
  }
  if (!is_circuit(g, c.second)) return "second circuit is not a circuit";
  if (circuit_balance(g, std::span<const Dart>(c.cycle)) != Balance::unbalanced ||
      circuit_balance(g, std::span<const Dart>(c.second)) != Balance::unbalanced) {
    return "bicircuit circuit is balanced";
  }
  const auto v1 = sorted_vertices(g, c.cycle);
  const auto v2 = sorted_vertices(g, c.second);
  const auto common = intersection(v1, v2);
  const auto [a0, a1] = c.attachment;
  if (c.path.empty()) {
    if (common.size() != 1) return "circuits of a pathless bicircuit must share exactly one vertex";
    if (a0 != common[0] || a1 != common[0]) return "attachment is not the shared vertex";
    return std::nullopt;
  }
  if (!common.empty()) return "circuits are not vertex-disjoint";
  if (g.endpoint(c.path.front()) != a0 || g.endpoint(c.path.back().partner()) != a1) {
    return "path ends do not match attachments";
  }
  if (!contains(v1, a0) || !contains(v2, a1)) return "path does not join the two circuits";
  std::vector<VertexId> path_vertices{a0};
  for (std::size_t i = 0; i < c.path.size(); ++i) {
    const Dart d = c.path[i];
    if (!g.has_edge(d.edge) || g.endpoint(d) != path_vertices.back()) return "path is not a walk";
    const VertexId next = g.endpoint(d.partner());
    const bool last = i + 1 == c.path.size();
    if (!last && (contains(v1, next) || contains(v2, next))) {
      return "path meets a circuit away from its ends";
    }
    path_vertices.push_back(next);
  }
  std::ranges::sort(path_vertices);
  if (std::ranges::adjacent_find(path_vertices) != path_vertices.end()) {
    return "path repeats a vertex";
  }
  return std::nullopt;
}

SignedCircuit make_balanced_circuit(const SignedGraph& g, std::span<const Dart> darts) {
  SignedCircuit c;
  c.kind = CircuitKind::balanced;
  c.cycle = canonical_cycle(darts);
  if (auto err = structural_error(g, c)) throw InvalidArgument("balanced circuit: " + *err);
  return c;
}

SignedCircuit make_bicircuit(const SignedGraph& g, std::span<const Dart> first,
                             std::span<const Dart> path, std::span<const Dart> second) {
  if (first.empty() || second.empty()) throw InvalidArgument("bicircuit: empty circuit");
  SignedCircuit c;
  c.kind = CircuitKind::bicircuit;
  c.cycle = canonical_cycle(first);
  c.second = canonical_cycle(second);
  c.path.assign(path.begin(), path.end());
  for (const Dart d : c.path) {
    if (!g.has_edge(d.edge)) throw InvalidArgument("bicircuit: path edge out of range");
  }
  for (const Dart d : first) {
    if (!g.has_edge(d.edge)) throw InvalidArgument("bicircuit: edge out of range");
  }
  for (const Dart d : second) {
    if (!g.has_edge(d.edge)) throw InvalidArgument("bicircuit: edge out of range");
  }
  if (!c.path.empty()) {
    c.attachment = {g.endpoint(c.path.front()), g.endpoint(c.path.back().partner())};
  } else {
    const auto common = intersection(sorted_vertices(g, c.cycle), sorted_vertices(g, c.second));
    if (common.size() != 1) {
      throw InvalidArgument("bicircuit: circuits of a pathless bicircuit must share one vertex");
    }
    c.attachment = {common[0], common[0]};
  }
  if (min_edge(c.second) < min_edge(c.cycle)) {
    std::swap(c.cycle, c.second);
    c.path = reversed_path(c.path);
    std::swap(c.attachment[0], c.attachment[1]);
  }
  if (auto err = structural_error(g, c)) throw InvalidArgument("bicircuit: " + *err);
  return c;
}

SignedCircuit balanced_from_edges(const SignedGraph& g, std::span<const EdgeId> edges) {
  auto darts = trace_circuit(g, edges);
  if (!darts) throw InvalidArgument("balanced circuit: edges do not form a circuit");
  return make_balanced_circuit(g, *darts);
}

SignedCircuit bicircuit_from_edges(const SignedGraph& g, std::span<const EdgeId> first,
                                   std::span<const EdgeId> path, std::span<const EdgeId> second) {
  auto c1 = trace_circuit(g, first);
  auto c2 = trace_circuit(g, second);
  if (!c1 || !c2) throw InvalidArgument("bicircuit: circuit edges do not form a circuit");
  std::vector<Dart> walk;
  if (!path.empty()) {
    const auto on_first = sorted_vertices(g, *c1);
    bool traced = false;
    for (int slot = 0; slot < 2 && !traced; ++slot) {
      if (!g.has_edge(path[0])) break;
      VertexId cur = g.endpoint(Dart{path[0], slot});
      if (!contains(on_first, cur)) continue;
      walk.clear();
      traced = true;
      for (const EdgeId e : path) {
        if (!g.has_edge(e)) { traced = false; break; }
        const Edge& ed = g.edge(e);
        if (ed.ends[0] == cur) {
          walk.push_back(Dart{e, 0});
          cur = ed.ends[1];
        } else if (ed.ends[1] == cur) {
          walk.push_back(Dart{e, 1});
          cur = ed.ends[0];
        } else {
          traced = false;
          break;
        }
      }
    }
    if (!traced) throw InvalidArgument("bicircuit: path edges do not form a walk from the first circuit");
  }
  return make_bicircuit(g, *c1, walk, *c2);
}

ConsistencyVerdict check_circuit_consistent(const SignedGraph& g, const Bidirection& w,
                                            std::span<const Dart> darts) {
  if (!is_circuit(g, darts)) throw InvalidArgument("check_circuit_consistent: not a circuit");
  std::vector<VertexId> bad;
  const std::size_t k = darts.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (!consistent_at(w, darts[(i + k - 1) % k].partner(), darts[i])) {
      bad.push_back(g.endpoint(darts[i]));
    }
  }
  ConsistencyVerdict verdict;
  if (bad.size() <= 1) {
    verdict.ok = true;
    verdict.faulty = bad;
  } else {
    verdict.violation = bad[0];
  }
  return verdict;
}

ConsistencyVerdict check_consistent(const SignedGraph& g, const Bidirection& w,
                                    const SignedCircuit& c) {
  if (auto err = structural_error(g, c)) throw InvalidArgument("check_consistent: " + *err);
  if (!w.compatible_with(g)) throw InvalidArgument("check_consistent: orientation does not fit graph");
  ConsistencyVerdict verdict;
  if (c.is_balanced()) {
    if (auto v = cycle_violation(g, w, c.cycle, -1)) {
      verdict.violation = v;
    } else {
      verdict.ok = true;
    }
    return verdict;
  }

  const auto [a0, a1] = c.attachment;
  auto fail = [&](VertexId v) {
    verdict.violation = v;
    return verdict;
  };
  if (auto v = cycle_violation(g, w, c.cycle, a0)) return fail(*v);
  if (auto v = cycle_violation(g, w, c.second, a1)) return fail(*v);

  const auto first_at = cycle_darts_at(g, c.cycle, a0);
  const auto second_at = cycle_darts_at(g, c.second, a1);
  // Across groups at an attachment vertex every pair must be consistent.
  auto groups_consistent = [&](std::span<const Dart> lhs, std::span<const Dart> rhs) {
    for (const Dart x : lhs) {
      for (const Dart y : rhs) {
        if (!consistent_at(w, x, y)) return false;
      }
    }
    return true;
  };
  if (c.path.empty()) {
    if (!groups_consistent(first_at, second_at)) return fail(a0);
  } else {
    const std::array<Dart, 1> head{c.path.front()};
    if (!groups_consistent(first_at, head)) return fail(a0);
    for (std::size_t i = 1; i < c.path.size(); ++i) {
      if (!consistent_at(w, c.path[i - 1].partner(), c.path[i])) return fail(g.endpoint(c.path[i]));
    }
    const std::array<Dart, 1> tail{c.path.back().partner()};
    if (!groups_consistent(tail, second_at)) return fail(a1);
  }

  verdict.ok = true;
  verdict.faulty = c.path.empty() ? std::vector<VertexId>{a0} : std::vector<VertexId>{a0, a1};
  // Kirchhoff of the characteristic flow certifies the local checks.
  ConsistentlyOriented co{c, w, verdict.faulty};
  if (!verify_flow(g, characteristic_flow(co, g))) {
    throw InternalError("consistent bicircuit whose characteristic flow breaks Kirchhoff");
  }
  return verdict;
}

ConsistentlyOriented orient_consistently(const SignedGraph& g, const Bidirection& w,
                                         const SignedCircuit& c) {
  if (auto err = structural_error(g, c)) throw InvalidArgument("orient_consistently: " + *err);
  Bidirection out = w;
  if (c.is_balanced()) {
    out = direct_cycle(out, c.cycle, w.toward(c.cycle[0]));
  } else {
    const auto [a0, a1] = c.attachment;
    const auto first = rotate_to(g, c.cycle, a0);
    out = direct_cycle(out, first, false);
    // first[0] and the closing arrival dart both point away from a0.
    out = direct_path(out, c.path, true);
    const bool arrival_toward =
        c.path.empty() ? false : out.toward(c.path.back().partner());
    const auto second = rotate_to(g, c.second, a1);
    out = direct_cycle(out, second, !arrival_toward);
    if (out.toward(c.cycle[0]) != w.toward(c.cycle[0])) {
      for (const EdgeId e : c.edges()) out = reverse_edge(out, e);
    }
  }
  auto verdict = check_consistent(g, out, c);
  if (!verdict.ok) throw InternalError("orient_consistently produced an inconsistent orientation");
  return ConsistentlyOriented{c, std::move(out), std::move(verdict.faulty)};
}

FlowAssignment characteristic_flow(const ConsistentlyOriented& co, const SignedGraph& ambient) {
  FlowAssignment chi = FlowAssignment::zero(ambient, co.orientation);
  const SignedCircuit& c = co.circuit;
  const HalfInt circuit_value = c.is_balanced() ? HalfInt::from_int(1) : HalfInt::half();
  for (const Dart d : c.cycle) chi[d.edge] = circuit_value;
  for (const Dart d : c.second) chi[d.edge] = circuit_value;
  for (const Dart d : c.path) chi[d.edge] = HalfInt::from_int(1);
  return chi;
}

std::vector<std::vector<Dart>> enumerate_circuits(const SignedGraph& g, int max_edges) {
  if (g.edge_count() > max_edges) {
    throw LimitExceeded("circuit enumeration limited to " + std::to_string(max_edges) + " edges");
  }
  std::vector<std::vector<Dart>> out;
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<Dart> stack;

  for (EdgeId s = 0; s < g.edge_count(); ++s) {
    const Edge& es = g.edge(s);
    if (es.is_loop()) {
      out.push_back({Dart{s, 0}});
      continue;
    }
    const VertexId home = es.ends[0];
    // Extend a path home -> ... -> v using edges above s back to home.
    auto extend = [&](auto&& self, VertexId v) -> void {
      for (const Dart d : g.darts_at(v)) {
        if (d.edge <= s || g.edge(d.edge).is_loop()) continue;
        const VertexId next = g.endpoint(d.partner());
        if (next == home) {
          stack.push_back(d);
          out.push_back(canonical_cycle(stack));
          stack.pop_back();
        } else if (!visited[static_cast<std::size_t>(next)]) {
          visited[static_cast<std::size_t>(next)] = 1;
          stack.push_back(d);
          self(self, next);
          stack.pop_back();
          visited[static_cast<std::size_t>(next)] = 0;
        }
      }
    };
    visited[static_cast<std::size_t>(home)] = 1;
    visited[static_cast<std::size_t>(es.ends[1])] = 1;
    stack.assign({Dart{s, 0}});
    extend(extend, es.ends[1]);
    visited[static_cast<std::size_t>(home)] = 0;
    visited[static_cast<std::size_t>(es.ends[1])] = 0;
  }
  return out;
}

std::vector<SignedCircuit> enumerate_signed_circuits(const SignedGraph& g, int max_edges) {
  const auto circuits = enumerate_circuits(g, max_edges);
  std::vector<SignedCircuit> out;
  std::vector<const std::vector<Dart>*> unbalanced;
  for (const auto& c : circuits) {
    if (circuit_balance(g, std::span<const Dart>(c)) == Balance::balanced) {
      out.push_back(make_balanced_circuit(g, c));
    } else {
      unbalanced.push_back(&c);
    }
  }

  std::set<SignedCircuit> seen;
  auto emit = [&](SignedCircuit c) {
    if (seen.insert(c).second) out.push_back(std::move(c));
  };

  for (std::size_t i = 0; i < unbalanced.size(); ++i) {
    const auto& c1 = *unbalanced[i];
    const auto v1 = sorted_vertices(g, c1);
    for (std::size_t j = i + 1; j < unbalanced.size(); ++j) {
      const auto& c2 = *unbalanced[j];
      const auto v2 = sorted_vertices(g, c2);
      const auto common = intersection(v1, v2);
      if (common.size() == 1) {
        emit(make_bicircuit(g, c1, {}, c2));
        continue;
      }
      if (!common.empty()) continue;

      // Every path from c1 to c2 whose inner vertices avoid both circuits.
      std::vector<std::uint8_t> on_path(static_cast<std::size_t>(g.vertex_count()), 0);
      std::vector<Dart> walk;
      auto extend = [&](auto&& self, VertexId v) -> void {
        for (const Dart d : g.darts_at(v)) {
          if (g.edge(d.edge).is_loop()) continue;
          const VertexId next = g.endpoint(d.partner());
          if (contains(v2, next)) {
            walk.push_back(d);
            emit(make_bicircuit(g, c1, walk, c2));
            walk.pop_back();
          } else if (!contains(v1, next) && !on_path[static_cast<std::size_t>(next)]) {
            on_path[static_cast<std::size_t>(next)] = 1;
            walk.push_back(d);
            self(self, next);
            walk.pop_back();
            on_path[static_cast<std::size_t>(next)] = 0;
          }
        }
      };
      for (const VertexId start : v1) extend(extend, start);
    }
  }
  return out;
}

}  // namespace sigflow
