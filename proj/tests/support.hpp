#pragma once

// Shared fixtures and independent checkers for the test binaries. The
// checkers deliberately avoid the library's own flow and consistency code:
// they work from raw per-dart bits and doubled values.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "sigflow/circuits.hpp"
#include "sigflow/decompose.hpp"
#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"
#include "sigflow/random.hpp"

namespace sigflow::testing {

// Two vertices u = 0, v = 1; positive parallels a = 0, b = 1; negative loops
// lu = 2 at u and lv = 3 at v.
inline constexpr EdgeId kA = 0;
inline constexpr EdgeId kB = 1;
inline constexpr EdgeId kLoopU = 2;
inline constexpr EdgeId kLoopV = 3;

inline SignedGraph two_loop_graph() {
  SignedGraph g(2);
  g.add_edge(0, 1, Sign::positive);
  g.add_edge(0, 1, Sign::positive);
  g.add_edge(0, 0, Sign::negative);
  g.add_edge(1, 1, Sign::negative);
  return g;
}

// a and b directed v -> u, lu with both darts away from u, lv with both
// darts toward v; value 1 everywhere.
inline FlowAssignment two_loop_flow(const SignedGraph& g) {
  const std::vector<std::uint8_t> bits{1, 1, 0, 1};
  FlowAssignment f = FlowAssignment::zero(g, Bidirection::from_bits(g, bits));
  for (EdgeId e = 0; e < 4; ++e) f[e] = HalfInt::from_int(1);
  return f;
}

inline std::vector<std::uint8_t> dart_bits(const Bidirection& w) {
  std::vector<std::uint8_t> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(w.edge_count()); ++e) {
    out.push_back(w.toward(Dart{e, 0}) ? 1 : 0);
    out.push_back(w.toward(Dart{e, 1}) ? 1 : 0);
  }
  return out;
}

// Kirchhoff's law from raw bits: +value for a dart pointing toward its
// vertex, -value for one pointing away, summed per vertex.
inline bool kirchhoff_holds(const SignedGraph& g, const std::vector<std::uint8_t>& toward,
                            const std::vector<std::int64_t>& doubled) {
  std::vector<std::int64_t> net(static_cast<std::size_t>(g.vertex_count()), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const bool compatible = ed.sign == Sign::positive ? toward[2 * e] != toward[2 * e + 1]
                                                      : toward[2 * e] == toward[2 * e + 1];
    if (!compatible) return false;
    for (int s = 0; s < 2; ++s) {
      const auto x = doubled[static_cast<std::size_t>(e)];
      net[static_cast<std::size_t>(ed.ends[static_cast<std::size_t>(s)])] += toward[2 * e + s] ? x : -x;
    }
  }
  for (const auto x : net) {
    if (x != 0) return false;
  }
  return true;
}

inline std::vector<std::int64_t> doubled_values(const FlowAssignment& f) {
  std::vector<std::int64_t> out;
  for (const HalfInt v : f.values) out.push_back(v.doubled());
  return out;
}

inline bool independent_flow_check(const SignedGraph& g, const FlowAssignment& f) {
  return kirchhoff_holds(g, dart_bits(f.orientation), doubled_values(f));
}

// Every consecutive dart pair (departure d_i, departure d_{i+1}) meets at a
// vertex; the pair is consistent iff exactly one of partner(d_i) and
// d_{i+1} points toward that vertex.
inline int inconsistent_pairs(const Bidirection& w, const std::vector<Dart>& darts, bool closed) {
  int bad = 0;
  const std::size_t n = darts.size();
  const std::size_t pairs = closed ? n : (n == 0 ? 0 : n - 1);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Dart arrive = darts[i].partner();
    const Dart leave = darts[(i + 1) % n];
    if (w.toward(arrive) == w.toward(leave)) ++bad;
  }
  return bad;
}

// Independent check of one term: balanced circuits consistent at every
// vertex; bicircuits consistent everywhere except exactly once on each
// circuit (at its attachment), with the path consistent internally and
// at both junctions.
inline bool term_consistent(const SignedGraph& g, const Bidirection& w, const SignedCircuit& c) {
  if (c.is_balanced()) return inconsistent_pairs(w, c.cycle, true) == 0;
  if (inconsistent_pairs(w, c.cycle, true) != 1 || inconsistent_pairs(w, c.second, true) != 1) {
    return false;
  }
  // The single inconsistent pair of each circuit sits at its attachment.
  auto bad_at_attachment = [&](const std::vector<Dart>& cyc, VertexId at) {
    const std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Dart arrive = cyc[i].partner();
      const Dart leave = cyc[(i + 1) % n];
      if (w.toward(arrive) == w.toward(leave)) return g.endpoint(leave) == at;
    }
    return false;
  };
  if (!bad_at_attachment(c.cycle, c.attachment[0]) || !bad_at_attachment(c.second, c.attachment[1])) {
    return false;
  }
  if (c.path.empty()) {
    const VertexId x = c.attachment[0];
    std::vector<Dart> at_x;
    for (const auto* cyc : {&c.cycle, &c.second}) {
      for (const Dart d : *cyc) {
        if (g.endpoint(d) == x) at_x.push_back(d);
        if (g.endpoint(d.partner()) == x) at_x.push_back(d.partner());
      }
    }
    // Four darts at x, two per circuit; each circuit's two agree, and the
    // circuits disagree.
    std::map<bool, int> count;
    for (const Dart d : at_x) ++count[w.toward(d)];
    return at_x.size() == 4 && count[true] == 2 && count[false] == 2 &&
           w.toward(at_x[0]) == w.toward(at_x[1]) && w.toward(at_x[2]) == w.toward(at_x[3]);
  }
  if (inconsistent_pairs(w, c.path, false) != 0) return false;
  // Junctions: the circuit's darts at the attachment both disagree with the
  // path dart there.
  auto junction_ok = [&](const std::vector<Dart>& cyc, VertexId at, Dart path_dart) {
    for (const Dart d : cyc) {
      for (const Dart h : {d, d.partner()}) {
        if (g.endpoint(h) == at && w.toward(h) == w.toward(path_dart)) return false;
      }
    }
    return true;
  };
  return junction_ok(c.cycle, c.attachment[0], c.path.front()) &&
         junction_ok(c.second, c.attachment[1], c.path.back().partner());
}

// Sum of coefficient times characteristic flow, built from the circuit
// structure alone and read along w, doubled.
inline std::vector<std::int64_t> term_sum(const SignedGraph& g, const Bidirection& w,
                                          const std::vector<Term>& terms) {
  std::vector<std::int64_t> sum(static_cast<std::size_t>(g.edge_count()), 0);
  for (const Term& t : terms) {
    const SignedCircuit& c = t.circuit.circuit;
    auto add = [&](const std::vector<Dart>& darts, std::int64_t doubled) {
      for (const Dart d : darts) {
        // The term's direction on each edge must agree with w; a disagreeing
        // edge would contribute with the opposite sign.
        const bool same = t.circuit.orientation.toward(Dart{d.edge, 0}) == w.toward(Dart{d.edge, 0});
        sum[static_cast<std::size_t>(d.edge)] += (same ? 1 : -1) * doubled * t.coefficient;
      }
    };
    if (c.is_balanced()) {
      add(c.cycle, 2);
    } else {
      add(c.cycle, 1);
      add(c.path, 2);
      add(c.second, 1);
    }
  }
  return sum;
}

// Rank of an edge set in the frame matroid of g: touched vertices minus
// balanced components. Computed with a parity union-find, independent of
// the library's circuit code.
inline int frame_rank(const SignedGraph& g, std::uint64_t mask) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<int> parent(n), parity(n, 0);
  std::vector<std::uint8_t> touched(n, 0), unbalanced(n, 0);
  for (std::size_t v = 0; v < n; ++v) parent[v] = static_cast<int>(v);
  auto find = [&](int v) {
    int p = 0;
    int r = v;
    while (parent[static_cast<std::size_t>(r)] != r) {
      p ^= parity[static_cast<std::size_t>(r)];
      r = parent[static_cast<std::size_t>(r)];
    }
    return std::pair{r, p};
  };
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!(mask >> e & 1)) continue;
    const Edge& ed = g.edge(e);
    touched[static_cast<std::size_t>(ed.ends[0])] = touched[static_cast<std::size_t>(ed.ends[1])] = 1;
    const int s = ed.sign == Sign::negative ? 1 : 0;
    const auto [ru, pu] = find(ed.ends[0]);
    const auto [rv, pv] = find(ed.ends[1]);
    if (ru == rv) {
      if ((pu ^ pv) != s) unbalanced[static_cast<std::size_t>(ru)] = 1;
    } else {
      parent[static_cast<std::size_t>(rv)] = ru;
      parity[static_cast<std::size_t>(rv)] = pu ^ pv ^ s;
      unbalanced[static_cast<std::size_t>(ru)] |= unbalanced[static_cast<std::size_t>(rv)];
    }
  }
  int rank = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!touched[v]) continue;
    ++rank;
    if (parent[v] == static_cast<int>(v) && !unbalanced[v]) --rank;
  }
  return rank;
}

// Minimal dependent edge sets of the frame matroid, as bitmasks: exactly
// the balanced circuits and unbalanced bicircuits.
inline std::vector<std::uint64_t> frame_circuits(const SignedGraph& g) {
  std::vector<std::uint64_t> out;
  const std::uint64_t full = std::uint64_t{1} << g.edge_count();
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const int size = std::popcount(mask);
    if (frame_rank(g, mask) == size) continue;
    bool minimal = true;
    for (EdgeId e = 0; e < g.edge_count() && minimal; ++e) {
      if ((mask >> e & 1) && frame_rank(g, mask & ~(std::uint64_t{1} << e)) != size - 1) minimal = false;
    }
    if (minimal) out.push_back(mask);
  }
  return out;
}

inline std::uint64_t edge_mask(const SignedCircuit& c) {
  std::uint64_t mask = 0;
  for (const EdgeId e : c.edges()) mask |= std::uint64_t{1} << e;
  return mask;
}

struct RandomInstance {
  SignedGraph graph;
  FlowAssignment flow;
  std::vector<SignedCircuit> circuits;
};

// Seeded random flow-admissible graph (at most 8 vertices, 16 edges) with a
// nonzero random integer flow bounded by 10.
inline std::optional<RandomInstance> random_instance(std::uint64_t seed, double negative_probability = -1.0) {
  std::mt19937_64 rng(seed);
  const int n = 1 + static_cast<int>(rng() % 8);
  const int m = 1 + static_cast<int>(rng() % 16);
  const double p = negative_probability >= 0.0 ? negative_probability : static_cast<double>(rng() % 5) / 4.0;
  const SignedGraph raw = generate_random(n, m, p, rng());
  SignedGraph g = admissible_part(raw);
  if (g.edge_count() == 0) return std::nullopt;
  auto circuits = enumerate_signed_circuits(g);
  for (int attempt = 0; attempt < 8; ++attempt) {
    FlowAssignment f = random_integer_flow(g, circuits, rng, 10);
    if (!support(f).empty()) return RandomInstance{std::move(g), std::move(f), std::move(circuits)};
  }
  return std::nullopt;
}

}  // namespace sigflow::testing
