#include "sigflow/cover.hpp"

#include <algorithm>
#include <cstdlib>
#include <bit>
#include <cstdint>
#include <limits>

namespace sigflow {

Cover Cover::of(const SignedGraph& g, std::vector<SignedCircuit> circuits) {
  Cover c;
  c.multiplicity.assign(static_cast<std::size_t>(g.edge_count()), 0);
  for (const auto& circuit : circuits) {
    for (const EdgeId e : circuit.edges()) ++c.multiplicity.at(static_cast<std::size_t>(e));
  }
  c.circuits = std::move(circuits);
  return c;
}

std::int64_t Cover::total_length() const {
  std::int64_t total = 0;
  for (const auto& c : circuits) total += circuit_length(c);
  return total;
}

bool Cover::covers_all() const {
  return std::ranges::all_of(multiplicity, [](int m) { return m > 0; });
}

DerivedCover cover_from_decomposition(const Decomposition& d, const SignedGraph& g) {
  std::vector<SignedCircuit> circuits;
  for (const Term& t : d.terms) {
    if (std::ranges::find(circuits, t.circuit.circuit) == circuits.end()) {
      circuits.push_back(t.circuit.circuit);
    }
  }
  DerivedCover out{Cover::of(g, std::move(circuits)), {}};
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (out.cover.multiplicity[static_cast<std::size_t>(e)] == 0) out.uncovered.push_back(e);
  }
  return out;
}

bool check_multiplicity_bound(const Cover& cover, const FlowAssignment& f) {
  if (cover.multiplicity.size() != f.values.size()) {
    throw InvalidArgument("check_multiplicity_bound: size mismatch");
  }
  for (std::size_t e = 0; e < f.values.size(); ++e) {
    // 2|f(e)| is the doubled absolute value.
    if (cover.multiplicity[e] > std::llabs(f.values[e].doubled())) return false;
  }
  return true;
}

bool check_length_bound(const Cover& cover, const SignedGraph& g, int k) {
  return cover.total_length() <= 2LL * (k - 1) * g.edge_count();
}

FlowAssignment flow_from_cover(std::span<const SignedCircuit> circuits, const SignedGraph& g) {
  if (circuits.size() > 30) throw LimitExceeded("flow_from_cover: at most 30 circuits");
  const Cover cover = Cover::of(g, {circuits.begin(), circuits.end()});
  if (!cover.covers_all()) throw InvalidArgument("flow_from_cover: circuits do not cover every edge");

  const Bidirection fixed = Bidirection::canonical(g);
  FlowAssignment psi = FlowAssignment::zero(g, fixed);
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const auto co = orient_consistently(g, fixed, circuits[i]);
    const std::int64_t weight = std::int64_t{1} << (2 * (i + 1) - 1);
    psi = flow_add(psi, flow_scale(reorient(characteristic_flow(co, g), fixed), weight));
  }
  return psi;
}

namespace {

class ExactCover {
 public:
  ExactCover(const SignedGraph& g, std::vector<SignedCircuit> circuits)
      : m_(static_cast<std::size_t>(g.edge_count())), circuits_(std::move(circuits)) {
    std::ranges::stable_sort(circuits_, {}, [](const SignedCircuit& c) { return circuit_length(c); });
    containing_.resize(m_);
    for (std::size_t i = 0; i < circuits_.size(); ++i) {
      masks_.push_back(0);
      for (const EdgeId e : circuits_[i].edges()) {
        masks_.back() |= std::uint64_t{1} << e;
        containing_[static_cast<std::size_t>(e)].push_back(i);
      }
    }
  }

  std::vector<SignedCircuit> solve() {
    best_length_ = std::numeric_limits<std::int64_t>::max();
    chosen_.clear();
    branch(0, 0);
    std::vector<SignedCircuit> out;
    for (const std::size_t i : best_) out.push_back(circuits_[i]);
    return out;
  }

 private:
  void branch(std::uint64_t covered, std::int64_t length) {
    const std::uint64_t full = m_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m_) - 1;
    const std::uint64_t open = full & ~covered;
    // Every uncovered edge needs at least one more unit of length.
    if (length + std::popcount(open) >= best_length_) return;
    if (open == 0) {
      best_length_ = length;
      best_ = chosen_;
      return;
    }
    // Branch on the uncovered edge with the fewest candidate circuits.
    std::size_t pick = m_;
    for (std::size_t e = 0; e < m_; ++e) {
      if (!(open >> e & 1)) continue;
      if (pick == m_ || containing_[e].size() < containing_[pick].size()) pick = e;
    }
    for (const std::size_t i : containing_[pick]) {
      chosen_.push_back(i);
      branch(covered | masks_[i], length + circuit_length(circuits_[i]));
      chosen_.pop_back();
    }
  }

  std::size_t m_;
  std::vector<SignedCircuit> circuits_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<std::size_t>> containing_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  std::int64_t best_length_ = std::numeric_limits<std::int64_t>::max();
};

}  // namespace

Cover shortest_cover_exact(const SignedGraph& g, int max_edges) {
  if (g.edge_count() > std::min(max_edges, 64)) {
    throw LimitExceeded("shortest_cover_exact limited to " + std::to_string(std::min(max_edges, 64)) + " edges");
  }
  auto circuits = enumerate_signed_circuits(g, std::max(max_edges, g.edge_count()));
  const Cover all = Cover::of(g, circuits);
  if (!all.covers_all()) throw NotFlowAdmissible("some edge lies on no signed circuit");
  return Cover::of(g, ExactCover(g, std::move(circuits)).solve());
}

}  // namespace sigflow
