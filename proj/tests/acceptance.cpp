// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "sigflow/cover.hpp"
#include "sigflow/decompose.hpp"
#include "sigflow/search.hpp"
#include "support.hpp"

using namespace sigflow;
using namespace sigflow::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

int failures = 0;

void report(int id, const char* title, const Verdict& v, const std::string& summary, double secs) {
  if (!v.pass) ++failures;
  std::printf("%s criterion %d: %s: %s (%.2f s)%s%s\n", v.pass ? "PASS" : "FAIL", id, title,
              summary.c_str(), secs, v.pass ? "" : " -- ", v.pass ? "" : v.detail.c_str());
  std::fflush(stdout);
}

std::string tag(std::uint64_t seed) { return "seed " + std::to_string(seed); }

// Classical decomposition of a nonnegative flow on an all-positive graph:
// read each edge as an arc from its away dart to its toward dart and peel
// directed cycles, each with the minimum value on it. Returns per-edge
// summed weights, doubled.
std::vector<std::int64_t> classical_cycle_weights(const SignedGraph& g, const FlowAssignment& f) {
  const auto m = static_cast<std::size_t>(g.edge_count());
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::int64_t> left(m), weights(m, 0);
  std::vector<VertexId> tail(m), head(m);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto i = static_cast<std::size_t>(e);
    left[i] = f[e].doubled() / 2;
    const bool first_toward = f.orientation.toward(Dart{e, 0});
    tail[i] = g.edge(e).ends[first_toward ? 1 : 0];
    head[i] = g.edge(e).ends[first_toward ? 0 : 1];
  }
  for (;;) {
    EdgeId start = -1;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (left[static_cast<std::size_t>(e)] > 0) {
        start = e;
        break;
      }
    }
    if (start < 0) break;
    // Conservation guarantees an outgoing positive arc at every head, so
    // walking forward must revisit a vertex.
    std::vector<int> seen_at(n, -1);
    std::vector<EdgeId> walk;
    VertexId at = tail[static_cast<std::size_t>(start)];
    EdgeId next = start;
    while (seen_at[static_cast<std::size_t>(at)] < 0) {
      seen_at[static_cast<std::size_t>(at)] = static_cast<int>(walk.size());
      walk.push_back(next);
      at = head[static_cast<std::size_t>(next)];
      next = -1;
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (left[static_cast<std::size_t>(e)] > 0 && tail[static_cast<std::size_t>(e)] == at) {
          next = e;
          break;
        }
      }
      if (next < 0) return {};  // not a flow
    }
    const std::vector<EdgeId> cycle(walk.begin() + seen_at[static_cast<std::size_t>(at)], walk.end());
    std::int64_t amount = left[static_cast<std::size_t>(cycle.front())];
    for (const EdgeId e : cycle) amount = std::min(amount, left[static_cast<std::size_t>(e)]);
    for (const EdgeId e : cycle) {
      left[static_cast<std::size_t>(e)] -= amount;
      weights[static_cast<std::size_t>(e)] += 2 * amount;
    }
  }
  return weights;
}

bool frame_admissible(const SignedGraph& g) {
  std::uint64_t covered = 0;
  for (const auto mask : frame_circuits(g)) covered |= mask;
  return covered == (std::uint64_t{1} << g.edge_count()) - 1;
}

bool nowhere_zero_integer(const SignedGraph& g, const FlowAssignment& f) {
  return verify_flow(g, f) && independent_flow_check(g, f) && f.is_integer() && f.is_nowhere_zero();
}

struct Suite2Item {
  std::uint64_t seed;
  RandomInstance inst;
  std::optional<int> k;  // minimal k for a nowhere-zero k-flow
  std::optional<FlowAssignment> kflow;
};

}  // namespace

int main() {
  std::int64_t guard_hits = 0;
  std::map<std::string, int> case_counts;
  auto record = [&](const EngineReport& r) {
    guard_hits += r.guard_hits;
    for (const StepCase c : r.cases) ++case_counts[to_string(c)];
  };

  // 1. Two-loop fixture.
  {
    const auto t0 = Clock::now();
    Verdict v;
    const SignedGraph g = two_loop_graph();
    const FlowAssignment f = two_loop_flow(g);
    EngineReport r;
    const Decomposition d = decompose(g, f, {}, &r);
    record(r);
    int bicircuits = 0;
    int balanced = 0;
    for (const Term& t : d.terms) {
      (t.circuit.circuit.is_balanced() ? balanced : bicircuits) += 1;
      v.require(t.coefficient == 1, "coefficient " + std::to_string(t.coefficient));
    }
    v.require(d.terms.size() == 2 && bicircuits == 2 && balanced == 0, "unexpected term structure");
    v.require(verify_decomposition(g, f, d), "decomposition does not verify");
    const double secs = seconds_since(t0);
    v.require(secs < 1.0, "too slow");
    report(1, "two-loop fixture", v,
           std::to_string(bicircuits) + " bicircuit terms, " + std::to_string(balanced) + " balanced", secs);
  }

  // 2. Random decomposition suite.
  std::vector<Suite2Item> suite2;
  {
    const auto t0 = Clock::now();
    Verdict v;
    std::int64_t terms = 0;
    for (std::uint64_t seed = 0; suite2.size() < 500; ++seed) {
      auto inst = random_instance(seed);
      if (!inst) continue;
      const SignedGraph& g = inst->graph;
      const FlowAssignment& f = inst->flow;
      v.require(g.vertex_count() <= 8 && g.edge_count() <= 16, tag(seed) + ": instance too large");
      v.require(frame_admissible(g), tag(seed) + ": graph not flow-admissible");
      for (const HalfInt x : f.values) v.require(std::llabs(x.doubled()) <= 20, tag(seed) + ": value above 10");
      EngineReport r;
      const Decomposition d = decompose(g, f, {}, &r);
      record(r);
      terms += static_cast<std::int64_t>(d.terms.size());
      v.require(verify_decomposition(g, f, d), tag(seed) + ": verify_decomposition false");
      v.require(term_sum(g, d.orientation, d.terms) == doubled_values(reorient(f, d.orientation)),
                tag(seed) + ": independent sum differs");
      for (const HalfInt x : reorient(f, d.orientation).values) {
        v.require(x.doubled() >= 0, tag(seed) + ": orientation not positive");
      }
      for (const Term& t : d.terms) {
        v.require(t.coefficient > 0, tag(seed) + ": nonpositive coefficient");
        v.require(term_consistent(g, d.orientation, t.circuit.circuit), tag(seed) + ": inconsistent term");
      }
      suite2.push_back({seed, std::move(*inst), std::nullopt, std::nullopt});
    }
    const double secs = seconds_since(t0);
    v.require(secs < 60.0, "too slow");
    std::string cases;
    for (const auto& [name, count] : case_counts) cases += " " + name + "=" + std::to_string(count);
    report(2, "random decomposition suite", v,
           std::to_string(suite2.size()) + " instances, " + std::to_string(terms) + " terms, steps:" + cases,
           secs);
  }

  // 3. All-positive instances against classical cycle decomposition.
  {
    const auto t0 = Clock::now();
    Verdict v;
    int count = 0;
    for (std::uint64_t seed = 100000; count < 150; ++seed) {
      const auto inst = random_instance(seed, 0.0);
      if (!inst) continue;
      ++count;
      const SignedGraph& g = inst->graph;
      EngineReport r;
      const Decomposition d = decompose(g, inst->flow, {}, &r);
      record(r);
      for (const Term& t : d.terms) v.require(t.circuit.circuit.is_balanced(), tag(seed) + ": bicircuit term");
      v.require(verify_decomposition(g, inst->flow, d), tag(seed) + ": verify_decomposition false");
      const FlowAssignment pos = reorient(inst->flow, d.orientation);
      v.require(term_sum(g, d.orientation, d.terms) == classical_cycle_weights(g, pos),
                tag(seed) + ": per-edge weights differ from classical decomposition");
    }
    report(3, "all-positive special case", v, std::to_string(count) + " instances", seconds_since(t0));
  }

  // 4. Admissibility versus nowhere-zero flows, exhaustively.
  {
    const auto t0 = Clock::now();
    Verdict v;
    std::int64_t graphs = 0;
    std::int64_t admissible = 0;
    std::int64_t discrepancies = 0;
    for_each_small_graph(4, 5, [&](const SignedGraph& g) {
      ++graphs;
      const bool adm = is_flow_admissible(g);
      const auto k = flow_number(g);
      if (adm) ++admissible;
      if (adm != k.has_value() || adm != frame_admissible(g)) ++discrepancies;
      if (k && !nowhere_zero_integer(g, *find_nowhere_zero_k_flow(g, *k))) ++discrepancies;
    });
    v.require(discrepancies == 0, std::to_string(discrepancies) + " discrepancies");
    const double secs = seconds_since(t0);
    v.require(secs < 300.0, "too slow");
    report(4, "admissible iff nowhere-zero flow", v,
           std::to_string(graphs) + " graphs, " + std::to_string(admissible) + " admissible, " +
               std::to_string(discrepancies) + " discrepancies",
           secs);
  }

  // Minimal nowhere-zero flows for suite 2, shared by 5 and 6.
  for (auto& item : suite2) {
    item.k = flow_number(item.inst.graph);
    if (item.k) item.kflow = find_nowhere_zero_k_flow(item.inst.graph, *item.k);
  }

  // 5. Multiplicity bound.
  {
    const auto t0 = Clock::now();
    Verdict v;
    int instances = 0;
    auto check = [&](const SignedGraph& g, const FlowAssignment& f, const std::string& where) {
      ++instances;
      const DerivedCover dc = cover_from_decomposition(decompose(g, f), g);
      v.require(dc.complete(), where + ": cover misses an edge");
      v.require(check_multiplicity_bound(dc.cover, f), where + ": multiplicity above 2|f(e)|");
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        v.require(dc.cover.multiplicity[static_cast<std::size_t>(e)] <= std::llabs(f[e].doubled()),
                  where + ": independent multiplicity check");
      }
    };
    for (const auto& item : suite2) {
      if (item.inst.flow.is_nowhere_zero()) check(item.inst.graph, item.inst.flow, tag(item.seed) + " random");
      if (item.kflow) check(item.inst.graph, *item.kflow, tag(item.seed) + " minimal");
    }
    v.require(instances >= 500, "too few nowhere-zero instances");
    report(5, "cover multiplicity bound", v, std::to_string(instances) + " nowhere-zero flows", seconds_since(t0));
  }

  // 6. Total length bound and exact cover comparison.
  {
    const auto t0 = Clock::now();
    Verdict v;
    int bounded = 0;
    int exact = 0;
    auto check = [&](const SignedGraph& g, int k, const FlowAssignment& f, const std::string& where) {
      ++bounded;
      const DerivedCover dc = cover_from_decomposition(decompose(g, f), g);
      v.require(check_length_bound(dc.cover, g, k), where + ": length bound fails");
      v.require(dc.cover.total_length() <= 2 * (k - 1) * g.edge_count(), where + ": independent length check");
      if (g.edge_count() <= 12) {
        ++exact;
        v.require(shortest_cover_exact(g).total_length() <= dc.cover.total_length(),
                  where + ": exact cover longer than derived");
      }
    };
    for (const auto& item : suite2) {
      if (item.k) check(item.inst.graph, *item.k, *item.kflow, tag(item.seed));
    }
    for_each_small_graph(4, 4, [&](const SignedGraph& g) {
      if (const auto k = flow_number(g)) check(g, *k, *find_nowhere_zero_k_flow(g, *k), "small graph");
    });
    report(6, "cover length bound", v,
           std::to_string(bounded) + " instances, " + std::to_string(exact) + " exact comparisons",
           seconds_since(t0));
  }

  // 7. Weighted sums over covers are nowhere-zero integer flows.
  {
    const auto t0 = Clock::now();
    Verdict v;
    std::int64_t covers = 0;
    std::mt19937_64 rng(77);
    auto check = [&](const SignedGraph& g, const std::vector<SignedCircuit>& cover, const std::string& where) {
      ++covers;
      v.require(nowhere_zero_integer(g, flow_from_cover(cover, g)), where + ": not a nowhere-zero integer flow");
    };
    for (const auto& item : suite2) {
      const SignedGraph& g = item.inst.graph;
      if (g.edge_count() > 10) continue;
      const auto& all = item.inst.circuits;
      const std::uint64_t full = (std::uint64_t{1} << g.edge_count()) - 1;
      if (all.size() <= 30) check(g, all, tag(item.seed) + " all circuits");
      if (item.kflow) {
        const auto dc = cover_from_decomposition(decompose(g, *item.kflow), g);
        check(g, dc.cover.circuits, tag(item.seed) + " derived");
      }
      check(g, shortest_cover_exact(g).circuits, tag(item.seed) + " exact");
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<SignedCircuit> chosen;
        std::uint64_t covered = 0;
        for (const auto& c : all) {
          if (rng() % 3 == 0 && chosen.size() < 30) {
            chosen.push_back(c);
            covered |= edge_mask(c);
          }
        }
        if (covered == full) check(g, chosen, tag(item.seed) + " random subset");
      }
    }
    for_each_small_graph(4, 4, [&](const SignedGraph& g) {
      const auto all = enumerate_signed_circuits(g);
      if (all.size() > 10) return;
      const std::uint64_t full = (std::uint64_t{1} << g.edge_count()) - 1;
      for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << all.size()); ++pick) {
        std::vector<SignedCircuit> chosen;
        std::uint64_t covered = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
          if (pick >> i & 1) {
            chosen.push_back(all[i]);
            covered |= edge_mask(all[i]);
          }
        }
        if (covered == full) check(g, chosen, "small graph subset");
      }
    });
    report(7, "flows from covers", v, std::to_string(covers) + " covers", seconds_since(t0));
  }

  // 8. Guard hits over suites 1-3.
  {
    Verdict v;
    v.require(guard_hits == 0, std::to_string(guard_hits) + " guard hits");
    report(8, "engine guards silent", v, std::to_string(guard_hits) + " guard hits", 0.0);
  }

  // 9. Switching invariance.
  {
    const auto t0 = Clock::now();
    Verdict v;
    std::mt19937_64 rng(99);
    std::int64_t verdicts = 0;
    for (int run = 0; run < 1000; ++run) {
      const auto& item = suite2[static_cast<std::size_t>(run) % suite2.size()];
      const SignedGraph& g = item.inst.graph;
      const FlowAssignment& f = item.inst.flow;
      SignedGraph h = g;
      Bidirection w = f.orientation;
      const int length = 1 + static_cast<int>(rng() % 10);
      for (int i = 0; i < length; ++i) {
        const auto x = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(g.vertex_count()));
        std::tie(h, w) = switch_vertex(h, w, x);
      }
      const FlowAssignment fh{w, f.values};
      const std::string where = "run " + std::to_string(run);
      v.require(verify_flow(h, fh) == verify_flow(g, f) && independent_flow_check(h, fh), where + ": flow changed");
      for (const auto& cyc : enumerate_circuits(g)) {
        v.require(circuit_balance(g, std::span<const Dart>(cyc)) == circuit_balance(h, std::span<const Dart>(cyc)),
                  where + ": circuit balance changed");
      }
      for (const auto& c : item.inst.circuits) {
        ++verdicts;
        const auto before = check_consistent(g, f.orientation, c);
        const auto after = check_consistent(h, w, c);
        v.require(before.ok == after.ok && before.faulty == after.faulty, where + ": consistency verdict changed");
        v.require(term_consistent(h, w, c) == before.ok, where + ": independent verdict differs");
      }
    }
    report(9, "switching invariance", v,
           "1000 sequences, " + std::to_string(verdicts) + " consistency verdicts", seconds_since(t0));
  }

  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
