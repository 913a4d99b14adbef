#pragma once

#include <stdexcept>
#include <string>

namespace esmg {

/// Error categories surfaced by the library. The CLI maps these onto the
/// exit-code contract (2 = usage/configuration, 3 = I/O or adapter).
enum class errc {
  invalid_grid,
  invalid_argument,
  missing_variable,
  insufficient_data,
  undefined_mean,
  shape_mismatch,
  config_error,
  format_error,       // container magic/header malformed
  corruption_error,   // declared sizes disagree with actual bytes
  integrity_error,    // payload hash mismatch
  io_error,
  adapter_init_error,
  adapter_broken,
  instability,
  degenerate_regression,
  domain_error,
  undefined_normalization,
  collation_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) raise(code, msg);
}

}  // namespace esmg
