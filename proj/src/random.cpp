#include "sigflow/random.hpp"

#include <algorithm>
#include <cstdlib>

namespace sigflow {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::vector<EdgeId> fractional_edges(const SignedCircuit& c) {
  std::vector<EdgeId> out;
  for (const Dart d : c.cycle) out.push_back(d.edge);
  for (const Dart d : c.second) out.push_back(d.edge);
  std::ranges::sort(out);
  return out;
}

}  // namespace

SignedGraph generate_random(int vertices, int edges, double negative_probability,
                            std::uint64_t seed) {
  if (vertices < 1 || edges < 0 || !(negative_probability >= 0.0 && negative_probability <= 1.0)) {
    throw InvalidArgument("generate_random: need n >= 1, m >= 0, 0 <= p <= 1");
  }
  std::mt19937_64 rng(seed);
  SignedGraph g(vertices);
  const auto n = static_cast<std::uint64_t>(vertices);
  for (int i = 0; i < edges; ++i) {
    const auto u = static_cast<VertexId>(rng() % n);
    const auto v = static_cast<VertexId>(rng() % n);
    const bool negative = unit(rng) < negative_probability;
    g.add_edge(u, v, negative ? Sign::negative : Sign::positive);
  }
  return g;
}

SignedGraph admissible_part(const SignedGraph& g, int max_edges) {
  std::vector<std::uint8_t> keep(static_cast<std::size_t>(g.edge_count()), 0);
  for (const auto& c : enumerate_signed_circuits(g, max_edges)) {
    for (const EdgeId e : c.edges()) keep[static_cast<std::size_t>(e)] = 1;
  }
  SignedGraph out(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (keep[static_cast<std::size_t>(e)]) out.add_edge(g.edge(e).ends[0], g.edge(e).ends[1], g.sign(e));
  }
  return out;
}

FlowAssignment random_integer_flow(const SignedGraph& g, std::span<const SignedCircuit> circuits,
                                   std::mt19937_64& rng, int max_abs) {
  const Bidirection fixed = Bidirection::canonical(g);
  FlowAssignment f = FlowAssignment::zero(g, fixed);
  if (circuits.empty()) return f;

  auto chi = [&](const SignedCircuit& c) {
    return reorient(characteristic_flow(orient_consistently(g, fixed, c), g), fixed);
  };
  auto within = [&](const FlowAssignment& h) {
    for (const HalfInt v : h.values) {
      if (std::llabs(v.doubled()) > 2LL * max_abs) return false;
    }
    return true;
  };

  const std::size_t terms = 1 + below(rng, 5);
  for (std::size_t t = 0; t < terms; ++t) {
    const SignedCircuit& c = circuits[below(rng, circuits.size())];
    const auto multiplier = static_cast<std::int64_t>(1 + below(rng, 3)) * (rng() % 2 ? 1 : -1);
    FlowAssignment piece = chi(c);
    if (!c.is_balanced()) {
      std::vector<const SignedCircuit*> partners;
      for (const auto& other : circuits) {
        if (&other != &c && !other.is_balanced() && fractional_edges(other) == fractional_edges(c)) {
          partners.push_back(&other);
        }
      }
      if (!partners.empty() && rng() % 2) {
        const FlowAssignment other = chi(*partners[below(rng, partners.size())]);
        piece = rng() % 2 ? flow_add(piece, other) : flow_subtract(piece, other);
      } else {
        piece = flow_scale(piece, 2);
      }
    }
    const FlowAssignment next = flow_add(f, flow_scale(piece, multiplier));
    if (within(next)) f = next;
  }

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (rng() % 2) {
      f.orientation = reverse_edge(f.orientation, e);
      f[e] = -f[e];
    }
  }
  return f;
}

void for_each_small_graph(int vertices, int max_edges,
                          const std::function<void(const SignedGraph&)>& visit) {
  std::vector<Edge> kinds;
  for (VertexId u = 0; u < vertices; ++u) {
    for (VertexId v = u; v < vertices; ++v) {
      kinds.push_back(Edge{{u, v}, Sign::positive});
      kinds.push_back(Edge{{u, v}, Sign::negative});
    }
  }
  std::vector<std::size_t> chosen;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    SignedGraph g(vertices);
    for (const std::size_t i : chosen) g.add_edge(kinds[i].ends[0], kinds[i].ends[1], kinds[i].sign);
    visit(g);
    if (static_cast<int>(chosen.size()) == max_edges) return;
    for (std::size_t i = from; i < kinds.size(); ++i) {
      chosen.push_back(i);
      self(self, i);
      chosen.pop_back();
    }
  };
  extend(extend, 0);
}

}  // namespace sigflow
