#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gramdist {

enum class Errc {
  cycle_detected,
  unknown_symbol,
  empty_production,
  expansion_too_large,
  out_of_range,
  empty_input,
  sentinel_in_alphabet,
  invalid_tau,
  length_mismatch,
  unsupported_k,
  fragment_too_large,
  invalid_cap,
  invalid_epsilon,
  invalid_params,
  too_large,
  invalid_groups,
  parse_error,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gramdist
