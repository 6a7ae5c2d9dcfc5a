#pragma once

// Text form of channel expressions used by the CLI:
//
//   expr := leaf | "tensor(" expr "," expr ")" | "dsum(" expr "," expr ")" | "comp(" expr ")"
//   leaf := "erasure:p=<float>,d=<int>" | "platypus:d=<int>"
//         | "rocket:d=<int>[,unitaries=clifford|haar,samples=<int>,seed=<int>]"
//
// Whitespace is insignificant. Leaf keys may appear in any order; parse
// errors carry the byte offset of the offending token.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/unitaries.hpp"

namespace qcap {

struct ChannelSpec {
  enum class Kind { erasure, platypus, rocket, tensor, dsum, comp };

  Kind kind = Kind::erasure;
  double p = 0.0;                       // erasure
  std::size_t d = 0;                    // leaves
  std::optional<UnitarySource> source;  // rocket
  std::optional<std::size_t> samples;   // rocket
  std::optional<std::uint64_t> seed;    // rocket
  std::vector<ChannelSpec> children;    // combinators
  std::size_t offset = 0;               // byte offset in the source text

  friend bool operator==(const ChannelSpec& a, const ChannelSpec& b) {
    return a.kind == b.kind && a.p == b.p && a.d == b.d && a.source == b.source && a.samples == b.samples &&
           a.seed == b.seed && a.children == b.children;
  }
};

ChannelSpec parse_channel_spec(std::string_view text);

/// Canonical text; parse(print(s)) == s.
std::string print_channel_spec(const ChannelSpec& spec);

/// Builds the channel. Rocket leaves become FlaggedChannel; combinators
/// lift branch-wise. Throws ParseError for out-of-range parameters
/// (offset of the leaf) and DimensionCapError past the cap.
AnyChannel build(const ChannelSpec& spec);

}  // namespace qcap
