#include "esmg/error.hpp"

namespace esmg {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_grid: return "invalid-grid";
    case errc::invalid_argument: return "invalid-argument";
    case errc::missing_variable: return "missing-variable";
    case errc::insufficient_data: return "insufficient-data";
    case errc::undefined_mean: return "undefined-mean";
    case errc::shape_mismatch: return "shape-mismatch";
    case errc::config_error: return "configuration-error";
    case errc::format_error: return "format-error";
    case errc::corruption_error: return "corruption-error";
    case errc::integrity_error: return "integrity-error";
    case errc::io_error: return "io-error";
    case errc::adapter_init_error: return "adapter-init-error";
    case errc::adapter_broken: return "adapter-broken";
    case errc::instability: return "instability";
    case errc::degenerate_regression: return "degenerate-regression";
    case errc::domain_error: return "domain-error";
    case errc::undefined_normalization: return "undefined-normalization";
    case errc::collation_error: return "collation-error";
  }
  return "unknown-error";
}

}  // namespace esmg
