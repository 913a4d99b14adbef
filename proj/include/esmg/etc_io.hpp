#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "esmg/dataset.hpp"

namespace esmg {

/// ETC ("ESM Tensor Container") v1. Byte layout, normative:
///   bytes 0..3   magic "ETC1"
///   bytes 4..7   unsigned 32-bit little-endian header length H
///   bytes 8..8+H canonical UTF-8 JSON header (sorted keys, no whitespace,
///                shortest round-trip float form)
///   remainder    payload: variables concatenated in declared order, 64-bit
///                little-endian floats, row-major in declared dim order
/// provenance.content_hash in the header is the hex SHA-256 of the payload.
inline constexpr char kEtcMagic[4] = {'E', 'T', 'C', '1'};
inline constexpr int kEtcFormatVersion = 1;

/// Serializes a dataset. Validation failures throw before any byte is
/// written. Returns the total byte count.
size_t write_dataset(const Dataset& ds, std::ostream& out);
/// Path form; "-" writes to standard output.
size_t write_dataset(const Dataset& ds, const std::string& path);

/// Reads and verifies magic, header, payload length, and content hash.
/// Throws format-error / corruption-error / integrity-error respectively.
Dataset read_dataset(std::istream& in);
/// Path form; "-" reads standard input.
Dataset read_dataset(const std::string& path);

/// The hex SHA-256 the container would carry for this dataset's payload.
std::string payload_hash(const Dataset& ds);

/// Exact equality of two datasets: axes/coords bitwise, variables in the
/// same order with bitwise-equal data (NaN == NaN), equal metadata.
/// content_hash participates only when both sides carry one.
bool datasets_bit_identical(const Dataset& a, const Dataset& b);

/// One metadata-compliance finding.
struct MetadataViolation {
  std::string item;     // variable name, axis name, or "provenance"
  std::string key;      // offending key, e.g. "units", "model_id", "time"
  std::string message;

  bool operator==(const MetadataViolation&) const = default;
};

/// Default compliance profile: units and standard_name required on every
/// variable, provenance.model_id nonempty.
std::vector<std::string> default_metadata_profile();

/// Checks required keys plus axis monotonicity (time strictly increasing,
/// levels strictly decreasing). Violations are data, not errors; an empty
/// result means compliant.
std::vector<MetadataViolation> validate_metadata(const Dataset& ds,
                                                 const std::vector<std::string>& profile);
std::vector<MetadataViolation> validate_metadata(const Dataset& ds);

}  // namespace esmg
