#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace esmg {

/// Incremental SHA-256 (FIPS 180-4). Self-contained so container hashes are
/// reproducible without a crypto library dependency.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* bytes, size_t len);
  /// Finalizes and returns the lowercase hex digest. The instance must be
  /// reset() before reuse.
  std::string hex_digest();

 private:
  void process_block(const uint8_t* block);

  uint32_t state_[8];
  uint64_t bit_count_ = 0;
  uint8_t buffer_[64];
  size_t buffer_len_ = 0;
};

std::string sha256_hex(const void* bytes, size_t len);
std::string sha256_hex(const std::string& s);

}  // namespace esmg
