#pragma once

// Line-oriented text formats.
//
// Instance file:
//
//   sg <n> <m>
//   e <id> <u> <v> <+|->        (m lines)
//   flow                        (optional)
//   f <id> <doubled> <bit>      (m lines)
//
// '#' starts a comment. Flow values are stored doubled so the file stays
// integer-only; <bit> is the canonical orientation bit of the edge.
//
// Decomposition report:
//
//   decomp <terms>
//   B <coeff> <edge:bit>...
//   U <coeff> <edge:bit>... | <edge:bit>... | <edge:bit>...
//
// where a U line lists the first circuit, the connecting path (possibly
// empty) and the second circuit, each in traversal order.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigflow/cover.hpp"
#include "sigflow/decompose.hpp"
#include "sigflow/errors.hpp"
#include "sigflow/flow.hpp"
#include "sigflow/graph.hpp"

namespace sigflow {

class ParseError : public InvalidArgument {
 public:
  ParseError(int line, const std::string& reason)
      : InvalidArgument("line " + std::to_string(line) + ": " + reason), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Instance {
  SignedGraph graph;
  std::optional<FlowAssignment> flow;
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const SignedGraph& g, const FlowAssignment* flow = nullptr);
inline std::string serialize_instance(const Instance& inst) {
  return serialize_instance(inst.graph, inst.flow ? &*inst.flow : nullptr);
}

/// JSON mirror of the instance file: "sg" {n, m}, "e" [{id, u, v, sign}],
/// and "flow" [{id, doubled, bit}] when a flow is given.
std::string instance_json(const SignedGraph& g, const FlowAssignment* flow = nullptr);

/// Throws InvalidArgument naming the first edge with an odd doubled value.
void require_integer_flow(const FlowAssignment& f);

std::string serialize_decomposition(const SignedGraph& g, const Decomposition& d);
/// Edges outside every term take their direction from `fallback`.
Decomposition parse_decomposition(const SignedGraph& g, std::string_view text,
                                  const Bidirection& fallback);
std::string decomposition_json(const SignedGraph& g, const Decomposition& d);

std::string serialize_cover(const Cover& cover, const std::vector<EdgeId>& uncovered = {});
std::string cover_json(const Cover& cover, const std::vector<EdgeId>& uncovered = {});

/// One line per circuit: "B <edges>" or "U <edges> | <edges> | <edges>".
std::string circuit_line(const SignedCircuit& c);

}  // namespace sigflow
