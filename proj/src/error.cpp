#include "gramdist/error.hpp"

namespace gramdist {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::unknown_symbol: return "UnknownSymbol";
    case Errc::empty_production: return "EmptyProduction";
    case Errc::expansion_too_large: return "ExpansionTooLarge";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::empty_input: return "EmptyInput";
    case Errc::sentinel_in_alphabet: return "SentinelInAlphabet";
    case Errc::invalid_tau: return "InvalidTau";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unsupported_k: return "UnsupportedK";
    case Errc::fragment_too_large: return "FragmentTooLarge";
    case Errc::invalid_cap: return "InvalidCap";
    case Errc::invalid_epsilon: return "InvalidEpsilon";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::too_large: return "TooLarge";
    case Errc::invalid_groups: return "InvalidGroups";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IOError";
  }
  return "Unknown";
}

}  // namespace gramdist
