#pragma once

// Half-integer flows over a bidirection.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sigflow/graph.hpp"

namespace sigflow {

/// Exact element of (1/2)Z stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_doubled(std::int64_t doubled) { return HalfInt(doubled); }
  static constexpr HalfInt from_int(std::int64_t value) { return HalfInt(2 * value); }
  static constexpr HalfInt half() { return HalfInt(1); }

  constexpr std::int64_t doubled() const { return doubled_; }
  constexpr bool is_integer() const { return doubled_ % 2 == 0; }
  constexpr bool is_fractional() const { return !is_integer(); }
  constexpr bool is_zero() const { return doubled_ == 0; }
  /// Integer part, rounding toward negative infinity.
  constexpr std::int64_t floor() const {
    return doubled_ >= 0 ? doubled_ / 2 : -((-doubled_ + 1) / 2);
  }

  constexpr HalfInt operator-() const { return HalfInt(-doubled_); }
  constexpr HalfInt& operator+=(HalfInt o) { doubled_ += o.doubled_; return *this; }
  constexpr HalfInt& operator-=(HalfInt o) { doubled_ -= o.doubled_; return *this; }
  constexpr HalfInt& operator*=(std::int64_t c) { doubled_ *= c; return *this; }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr HalfInt operator*(HalfInt a, std::int64_t c) { return a *= c; }
  friend constexpr HalfInt operator*(std::int64_t c, HalfInt a) { return a *= c; }
  friend constexpr auto operator<=>(const HalfInt&, const HalfInt&) = default;

  /// "3", "-1/2", "5/2".
  std::string to_string() const;

 private:
  constexpr explicit HalfInt(std::int64_t doubled) : doubled_(doubled) {}
  std::int64_t doubled_ = 0;
};

/// Values per edge, read along a fixed bidirection.
struct FlowAssignment {
  Bidirection orientation;
  std::vector<HalfInt> values;

  static FlowAssignment zero(const SignedGraph& g, Bidirection orientation);
  static FlowAssignment zero(const SignedGraph& g) { return zero(g, Bidirection::canonical(g)); }

  HalfInt operator[](EdgeId e) const { return values.at(static_cast<std::size_t>(e)); }
  HalfInt& operator[](EdgeId e) { return values.at(static_cast<std::size_t>(e)); }
  std::size_t size() const noexcept { return values.size(); }

  bool is_integer() const;
  bool is_nowhere_zero() const;
  /// Sum of absolute values, doubled.
  std::int64_t total_doubled() const;

  friend bool operator==(const FlowAssignment&, const FlowAssignment&) = default;
};

/// Kirchhoff's law at every vertex: values on darts pointing toward the
/// vertex sum to the values on darts pointing away. A loop counts once per
/// dart. Throws InvalidArgument on size mismatch.
bool verify_flow(const SignedGraph& g, const FlowAssignment& f);

/// Net inflow (toward minus away) at each vertex, doubled.
std::vector<std::int64_t> vertex_excess(const SignedGraph& g, const FlowAssignment& f);

/// Reverses every edge carrying a negative value and negates that value.
/// Throws InvalidArgument if f is not a flow.
FlowAssignment positively_orient(const SignedGraph& g, const FlowAssignment& f);

/// The same flow read along `target`: edges whose direction differs are
/// negated.
FlowAssignment reorient(const FlowAssignment& f, const Bidirection& target);

/// Positive orientation with zero edges pinned to canonical bit 0. Two
/// flows represent the same flow iff their normal forms are equal.
FlowAssignment normalize(const SignedGraph& g, const FlowAssignment& f);

FlowAssignment flow_add(const FlowAssignment& f, const FlowAssignment& h);
FlowAssignment flow_subtract(const FlowAssignment& f, const FlowAssignment& h);
FlowAssignment flow_scale(const FlowAssignment& f, std::int64_t c);

/// Edges with nonzero value, ascending.
std::vector<EdgeId> support(const FlowAssignment& f);

}  // namespace sigflow
