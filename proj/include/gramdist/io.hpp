#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "gramdist/slp.hpp"

namespace gramdist {

// SLPv1 text format: "SLPv1", "start <id>", then "T <id> <codepoint>" or "N <id> <ids...>".
void write_slp(std::ostream& out, const Slp& g);
Slp read_slp(std::istream& in);
bool looks_like_slp(std::string_view bytes);

// UTF-8; bytes outside a valid sequence map to U+DC80..U+DCFF and encode back unchanged.
Text utf8_decode(std::string_view bytes);
std::string utf8_encode(std::span<const Char> text);

}  // namespace gramdist
