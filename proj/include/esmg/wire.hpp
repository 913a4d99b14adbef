#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace esmg::wire {

/// Adapter wire protocol v1. The child writes one UTF-8 JSON handshake line
/// on stdout:
///   {"protocol":"esm-adapter/1","nlat":..,"nlon":..,"variables":[..],
///    "dt_seconds":..,"deterministic":true}
/// then parent and child exchange frames: 4-byte magic "EVF1", unsigned
/// 32-bit little-endian payload length, payload = nvar*nlat*nlon 64-bit
/// little-endian floats in advertised variable order, row-major (lat, lon).
/// A zero-length frame from the parent requests shutdown; the child exits 0.
inline constexpr char kFrameMagic[4] = {'E', 'V', 'F', '1'};
inline constexpr const char* kProtocolId = "esm-adapter/1";

struct Handshake {
  std::string protocol;
  int nlat = 0;
  int nlon = 0;
  std::vector<std::string> variables;
  double dt_seconds = 0.0;
  bool deterministic = false;
};

std::string encode_handshake(const Handshake& h);
/// Throws adapter-init-error on malformed input.
Handshake decode_handshake(const std::string& line);

enum class FrameStatus { ok, shutdown, eof };

/// Blocking frame read from a file descriptor. `ok` fills `payload`;
/// `shutdown` is the zero-length frame; `eof` means the stream ended before
/// a frame started. Malformed frames throw adapter-broken.
FrameStatus read_frame(int fd, std::vector<double>& payload);

/// Writes one frame; throws io-error on failure.
void write_frame(int fd, const double* data, size_t count);
void write_shutdown(int fd);

/// Reads one '\n'-terminated line, waiting at most timeout_ms (<=0 blocks
/// indefinitely). Throws adapter-init-error on timeout or EOF.
std::string read_line(int fd, int timeout_ms);

}  // namespace esmg::wire
