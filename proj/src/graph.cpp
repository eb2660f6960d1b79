#include "sigflow/graph.hpp"

#include <algorithm>
#include <string>

namespace sigflow {

SignedGraph::SignedGraph(int vertex_count) {
  if (vertex_count < 0) throw InvalidArgument("negative vertex count");
  incidence_.resize(static_cast<std::size_t>(vertex_count));
}

EdgeId SignedGraph::add_edge(VertexId u, VertexId v, Sign s) {
  if (!has_vertex(u) || !has_vertex(v)) {
    throw InvalidArgument("add_edge: vertex id out of range (" + std::to_string(u) + ", " +
                          std::to_string(v) + ")");
  }
  const auto e = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{{u, v}, s});
  incidence_[static_cast<std::size_t>(u)].push_back(Dart{e, 0});
  incidence_[static_cast<std::size_t>(v)].push_back(Dart{e, 1});
  return e;
}

std::span<const Dart> SignedGraph::darts_at(VertexId v) const {
  if (!has_vertex(v)) throw InvalidArgument("darts_at: vertex id out of range");
  return incidence_[static_cast<std::size_t>(v)];
}

SignedGraph SignedGraph::with_sign(EdgeId e, Sign s) const {
  if (!has_edge(e)) throw InvalidArgument("with_sign: edge id out of range");
  SignedGraph out = *this;
  out.edges_[static_cast<std::size_t>(e)].sign = s;
  return out;
}

Bidirection Bidirection::canonical(const SignedGraph& g) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.edge_count()), 0);
  return from_bits(g, bits);
}

Bidirection Bidirection::from_bits(const SignedGraph& g, std::span<const std::uint8_t> bits) {
  if (bits.size() != static_cast<std::size_t>(g.edge_count())) {
    throw InvalidArgument("orientation bit count does not match edge count");
  }
  Bidirection w;
  w.toward_.resize(2 * bits.size());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const bool b = bits[static_cast<std::size_t>(e)] != 0;
    w.toward_[Dart{e, 0}.index()] = b;
    w.toward_[Dart{e, 1}.index()] = g.sign(e) == Sign::positive ? !b : b;
  }
  return w;
}

Bidirection Bidirection::from_darts(const SignedGraph& g, std::vector<std::uint8_t> toward) {
  Bidirection w;
  w.toward_ = std::move(toward);
  if (!w.compatible_with(g)) throw InvalidArgument("dart directions violate compatibility");
  return w;
}

bool Bidirection::compatible_with(const SignedGraph& g) const {
  if (toward_.size() != 2 * static_cast<std::size_t>(g.edge_count())) return false;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const bool a = toward(Dart{e, 0});
    const bool b = toward(Dart{e, 1});
    if ((g.sign(e) == Sign::positive) != (a != b)) return false;
  }
  return true;
}

Bidirection reverse_edge(const Bidirection& w, EdgeId e) {
  if (e < 0 || static_cast<std::size_t>(e) >= w.edge_count()) {
    throw InvalidArgument("reverse_edge: edge id out of range");
  }
  Bidirection out = w;
  out.toward_[Dart{e, 0}.index()] ^= 1;
  out.toward_[Dart{e, 1}.index()] ^= 1;
  return out;
}

std::pair<SignedGraph, Bidirection> switch_vertex(const SignedGraph& g, const Bidirection& w,
                                                  VertexId v) {
  if (!g.has_vertex(v)) throw InvalidArgument("switch_vertex: vertex id out of range");
  SignedGraph h = g;
  Bidirection out = w;
  for (const Dart d : g.darts_at(v)) {
    out.toward_[d.index()] ^= 1;
    // A loop's two darts both sit at v; its sign stays.
    if (!g.edge(d.edge).is_loop()) h = h.with_sign(d.edge, flipped(g.sign(d.edge)));
  }
  return {std::move(h), std::move(out)};
}

std::vector<VertexId> departure_vertices(const SignedGraph& g, std::span<const Dart> darts) {
  std::vector<VertexId> out;
  out.reserve(darts.size());
  for (const Dart d : darts) out.push_back(g.endpoint(d));
  return out;
}

bool is_circuit(const SignedGraph& g, std::span<const Dart> darts) {
  if (darts.empty()) return false;
  std::vector<VertexId> seen;
  std::vector<EdgeId> edges;
  for (std::size_t i = 0; i < darts.size(); ++i) {
    const Dart d = darts[i];
    if (!g.has_edge(d.edge) || (d.slot != 0 && d.slot != 1)) return false;
    const Dart next = darts[(i + 1) % darts.size()];
    if (!g.has_edge(next.edge)) return false;
    if (g.endpoint(d.partner()) != g.endpoint(next)) return false;
    seen.push_back(g.endpoint(d));
    edges.push_back(d.edge);
  }
  std::ranges::sort(seen);
  std::ranges::sort(edges);
  return std::ranges::adjacent_find(seen) == seen.end() &&
         std::ranges::adjacent_find(edges) == edges.end();
}

std::optional<std::vector<Dart>> trace_circuit(const SignedGraph& g,
                                               std::span<const EdgeId> edges) {
  if (edges.empty()) return std::nullopt;
  for (const EdgeId e : edges) {
    if (!g.has_edge(e)) return std::nullopt;
  }
  if (edges.size() == 1) {
    std::vector<Dart> loop{Dart{edges[0], 0}};
    if (is_circuit(g, loop)) return loop;
    return std::nullopt;
  }
  for (int start_slot = 0; start_slot < 2; ++start_slot) {
    std::vector<Dart> darts;
    VertexId cur = g.endpoint(Dart{edges[0], start_slot});
    bool ok = true;
    for (const EdgeId e : edges) {
      const Edge& ed = g.edge(e);
      if (ed.ends[0] == cur) {
        darts.push_back(Dart{e, 0});
        cur = ed.ends[1];
      } else if (ed.ends[1] == cur) {
        darts.push_back(Dart{e, 1});
        cur = ed.ends[0];
      } else {
        ok = false;
        break;
      }
    }
    if (ok && is_circuit(g, darts)) return darts;
  }
  return std::nullopt;
}

namespace {

Balance balance_of_edges(const SignedGraph& g, auto&& edge_ids) {
  int negatives = 0;
  for (const EdgeId e : edge_ids) negatives += g.sign(e) == Sign::negative ? 1 : 0;
  return negatives % 2 == 0 ? Balance::balanced : Balance::unbalanced;
}

}  // namespace

Balance circuit_balance(const SignedGraph& g, std::span<const EdgeId> edges) {
  if (!trace_circuit(g, edges)) throw InvalidArgument("circuit_balance: edges do not form a circuit");
  return balance_of_edges(g, edges);
}

Balance circuit_balance(const SignedGraph& g, std::span<const Dart> darts) {
  if (!is_circuit(g, darts)) throw InvalidArgument("circuit_balance: darts do not form a circuit");
  std::vector<EdgeId> ids;
  for (const Dart d : darts) ids.push_back(d.edge);
  return balance_of_edges(g, ids);
}

}  // namespace sigflow
