#include "sigflow/flow.hpp"

#include <cstdlib>

namespace sigflow {

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(doubled_ / 2);
  return std::to_string(doubled_) + "/2";
}

FlowAssignment FlowAssignment::zero(const SignedGraph& g, Bidirection orientation) {
  if (!orientation.compatible_with(g)) throw InvalidArgument("orientation does not fit graph");
  return FlowAssignment{std::move(orientation),
                        std::vector<HalfInt>(static_cast<std::size_t>(g.edge_count()))};
}

bool FlowAssignment::is_integer() const {
  for (const HalfInt v : values) {
    if (!v.is_integer()) return false;
  }
  return true;
}

bool FlowAssignment::is_nowhere_zero() const {
  for (const HalfInt v : values) {
    if (v.is_zero()) return false;
  }
  return true;
}

std::int64_t FlowAssignment::total_doubled() const {
  std::int64_t total = 0;
  for (const HalfInt v : values) total += std::llabs(v.doubled());
  return total;
}

namespace {

void require_sized(const SignedGraph& g, const FlowAssignment& f) {
  const auto m = static_cast<std::size_t>(g.edge_count());
  if (f.values.size() != m || f.orientation.edge_count() != m) {
    throw InvalidArgument("flow size does not match edge count");
  }
}

void require_same_orientation(const FlowAssignment& f, const FlowAssignment& h) {
  if (f.orientation != h.orientation || f.values.size() != h.values.size()) {
    throw InvalidArgument("flows are read along different orientations");
  }
}

}  // namespace

std::vector<std::int64_t> vertex_excess(const SignedGraph& g, const FlowAssignment& f) {
  require_sized(g, f);
  std::vector<std::int64_t> excess(static_cast<std::size_t>(g.vertex_count()), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const std::int64_t x = f[e].doubled();
    for (int slot = 0; slot < 2; ++slot) {
      const Dart d{e, slot};
      excess[static_cast<std::size_t>(g.endpoint(d))] += f.orientation.toward(d) ? x : -x;
    }
  }
  return excess;
}

bool verify_flow(const SignedGraph& g, const FlowAssignment& f) {
  require_sized(g, f);
  if (!f.orientation.compatible_with(g)) {
    throw InvalidArgument("flow orientation violates compatibility");
  }
  for (const std::int64_t x : vertex_excess(g, f)) {
    if (x != 0) return false;
  }
  return true;
}

FlowAssignment positively_orient(const SignedGraph& g, const FlowAssignment& f) {
  if (!verify_flow(g, f)) throw InvalidArgument("positively_orient: input is not a flow");
  FlowAssignment out = f;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (out[e] < HalfInt{}) {
      out.orientation = reverse_edge(out.orientation, e);
      out[e] = -out[e];
    }
  }
  return out;
}

FlowAssignment reorient(const FlowAssignment& f, const Bidirection& target) {
  if (target.edge_count() != f.values.size()) {
    throw InvalidArgument("reorient: orientation size mismatch");
  }
  FlowAssignment out{target, f.values};
  for (EdgeId e = 0; e < static_cast<EdgeId>(f.values.size()); ++e) {
    if (target.bit(e) != f.orientation.bit(e)) out[e] = -out[e];
  }
  return out;
}

FlowAssignment normalize(const SignedGraph& g, const FlowAssignment& f) {
  FlowAssignment out = positively_orient(g, f);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (out[e].is_zero() && out.orientation.bit(e) != 0) {
      out.orientation = reverse_edge(out.orientation, e);
    }
  }
  return out;
}

FlowAssignment flow_add(const FlowAssignment& f, const FlowAssignment& h) {
  require_same_orientation(f, h);
  FlowAssignment out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += h.values[i];
  return out;
}

FlowAssignment flow_subtract(const FlowAssignment& f, const FlowAssignment& h) {
  require_same_orientation(f, h);
  FlowAssignment out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= h.values[i];
  return out;
}

FlowAssignment flow_scale(const FlowAssignment& f, std::int64_t c) {
  FlowAssignment out = f;
  for (HalfInt& v : out.values) v *= c;
  return out;
}

std::vector<EdgeId> support(const FlowAssignment& f) {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!f.values[i].is_zero()) out.push_back(static_cast<EdgeId>(i));
  }
  return out;
}

}  // namespace sigflow
