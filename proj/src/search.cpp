#include "sigflow/search.hpp"

#include <chrono>
#include <cstdlib>

#include "sigflow/circuits.hpp"

namespace sigflow {

namespace {

class FlowSearch {
 public:
  FlowSearch(const SignedGraph& g, int k, const SearchLimits& limits)
      : g_(g), k_(k), limits_(limits), orientation_(Bidirection::canonical(g)),
        values_(static_cast<std::size_t>(g.edge_count()), 0),
        excess_(static_cast<std::size_t>(g.vertex_count()), 0),
        open_(static_cast<std::size_t>(g.vertex_count()), 0),
        started_(std::chrono::steady_clock::now()) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      for (int slot = 0; slot < 2; ++slot) ++open_[vertex(Dart{e, slot})];
    }
  }

  std::optional<FlowAssignment> run() {
    if (!search(g_.edge_count(), true)) return std::nullopt;
    FlowAssignment f = FlowAssignment::zero(g_, orientation_);
    for (EdgeId e = 0; e < g_.edge_count(); ++e) f[e] = HalfInt::from_int(values_[idx(e)]);
    return f;
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  std::size_t vertex(Dart d) const { return idx(g_.endpoint(d)); }
  int coefficient(Dart d) const { return orientation_.toward(d) ? 1 : -1; }

  void apply(EdgeId e, int x, int sign) {
    for (int slot = 0; slot < 2; ++slot) {
      const Dart d{e, slot};
      excess_[vertex(d)] += sign * coefficient(d) * x;
      open_[vertex(d)] -= sign;
    }
  }

  bool feasible(VertexId v) const {
    const auto i = idx(v);
    if (open_[i] == 0) return excess_[i] == 0;
    return std::llabs(excess_[i]) <= static_cast<std::int64_t>(k_ - 1) * open_[i];
  }

  void charge() {
    if (++nodes_ > limits_.node_budget) throw BudgetExceeded("flow search node budget exhausted");
    if ((nodes_ & 0xfff) == 0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - started_;
      if (spent.count() > limits_.time_budget_seconds) {
        throw BudgetExceeded("flow search time budget exhausted");
      }
    }
  }

  // Unassigned edge with the fewest open darts at one of its ends.
  EdgeId pick() const {
    EdgeId best = -1;
    int best_open = 0;
    for (EdgeId e = 0; e < g_.edge_count(); ++e) {
      if (values_[idx(e)] != 0) continue;
      const Edge& ed = g_.edge(e);
      const int o = std::min(open_[idx(ed.ends[0])], open_[idx(ed.ends[1])]);
      if (best < 0 || o < best_open) {
        best = e;
        best_open = o;
      }
    }
    return best;
  }

  bool try_value(EdgeId e, int x, int remaining, bool first) {
    const Edge& ed = g_.edge(e);
    values_[idx(e)] = x;
    apply(e, x, 1);
    if (feasible(ed.ends[0]) && feasible(ed.ends[1]) && search(remaining - 1, first)) return true;
    apply(e, x, -1);
    values_[idx(e)] = 0;
    return false;
  }

  bool search(int remaining, bool first) {
    charge();
    if (remaining == 0) return true;
    const EdgeId e = pick();
    const Edge& ed = g_.edge(e);

    // The last open dart at a non-loop end fixes the value.
    for (int slot = 0; slot < 2 && !ed.is_loop(); ++slot) {
      const Dart d{e, slot};
      if (open_[vertex(d)] != 1) continue;
      const std::int64_t x = -excess_[vertex(d)] * coefficient(d);
      if (x == 0 || std::llabs(x) > k_ - 1) return false;
      if (first && x < 0) return false;
      return try_value(e, static_cast<int>(x), remaining, false);
    }
    // Negating every value maps flows to flows, so the first choice is positive.
    for (int magnitude = 1; magnitude < k_; ++magnitude) {
      for (const int x : {magnitude, -magnitude}) {
        if (first && x < 0) continue;
        if (try_value(e, x, remaining, false)) return true;
      }
    }
    return false;
  }

  const SignedGraph& g_;
  int k_;
  const SearchLimits& limits_;
  Bidirection orientation_;
  std::vector<int> values_;
  std::vector<std::int64_t> excess_;
  std::vector<int> open_;
  std::int64_t nodes_ = 0;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace

std::optional<FlowAssignment> find_nowhere_zero_k_flow(const SignedGraph& g, int k,
                                                       const SearchLimits& limits) {
  if (k < 2) throw InvalidArgument("find_nowhere_zero_k_flow: k must be at least 2");
  if (g.edge_count() > limits.max_edges) {
    throw LimitExceeded("flow search limited to " + std::to_string(limits.max_edges) + " edges");
  }
  auto f = FlowSearch(g, k, limits).run();
  if (f && !verify_flow(g, *f)) throw InternalError("flow search returned a non-flow");
  return f;
}

bool is_flow_admissible(const SignedGraph& g, int max_edges) {
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(g.edge_count()), 0);
  for (const auto& c : enumerate_signed_circuits(g, max_edges)) {
    for (const EdgeId e : c.edges()) covered[static_cast<std::size_t>(e)] = 1;
  }
  for (const auto x : covered) {
    if (!x) return false;
  }
  return true;
}

std::optional<int> flow_number(const SignedGraph& g, const SearchLimits& limits) {
  for (int k = 2; k <= limits.max_k; ++k) {
    if (find_nowhere_zero_k_flow(g, k, limits)) return k;
  }
  return std::nullopt;
}

}  // namespace sigflow
