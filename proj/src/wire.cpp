#include "esmg/wire.hpp"

#include <poll.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

#include "esmg/error.hpp"

namespace esmg::wire {

namespace {

/// Reads exactly n bytes; returns bytes actually read (short only at EOF).
size_t read_exact(int fd, void* buf, size_t n) {
  uint8_t* p = static_cast<uint8_t*>(buf);
  size_t got = 0;
  while (got < n) {
    const ssize_t r = ::read(fd, p + got, n - got);
    if (r < 0) {
      if (errno == EINTR) continue;
      raise(errc::io_error, std::string("read failed: ") + std::strerror(errno));
    }
    if (r == 0) break;
    got += size_t(r);
  }
  return got;
}

void write_all(int fd, const void* buf, size_t n) {
  const uint8_t* p = static_cast<const uint8_t*>(buf);
  size_t put = 0;
  while (put < n) {
    const ssize_t r = ::write(fd, p + put, n - put);
    if (r < 0) {
      if (errno == EINTR) continue;
      raise(errc::io_error, std::string("write failed: ") + std::strerror(errno));
    }
    put += size_t(r);
  }
}

}  // namespace

std::string encode_handshake(const Handshake& h) {
  nlohmann::json j;
  j["protocol"] = h.protocol;
  j["nlat"] = h.nlat;
  j["nlon"] = h.nlon;
  j["variables"] = h.variables;
  j["dt_seconds"] = h.dt_seconds;
  j["deterministic"] = h.deterministic;
  return j.dump();
}

Handshake decode_handshake(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  require(!j.is_discarded() && j.is_object(), errc::adapter_init_error,
          "handshake is not valid JSON: " + line);
  Handshake h;
  try {
    h.protocol = j.at("protocol").get<std::string>();
    h.nlat = j.at("nlat").get<int>();
    h.nlon = j.at("nlon").get<int>();
    h.variables = j.at("variables").get<std::vector<std::string>>();
    h.dt_seconds = j.at("dt_seconds").get<double>();
    h.deterministic = j.at("deterministic").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    raise(errc::adapter_init_error, std::string("malformed handshake: ") + e.what());
  }
  require(h.protocol == kProtocolId, errc::adapter_init_error,
          "unsupported protocol '" + h.protocol + "'");
  require(h.nlat >= 2 && h.nlon >= 4, errc::adapter_init_error, "handshake grid too small");
  require(!h.variables.empty(), errc::adapter_init_error, "handshake advertises no variables");
  require(h.dt_seconds > 0.0, errc::adapter_init_error, "handshake dt must be positive");
  return h;
}

FrameStatus read_frame(int fd, std::vector<double>& payload) {
  char magic[4];
  const size_t got = read_exact(fd, magic, 4);
  if (got == 0) return FrameStatus::eof;
  require(got == 4 && std::memcmp(magic, kFrameMagic, 4) == 0, errc::adapter_broken,
          "bad frame magic");

  uint8_t lenbuf[4];
  require(read_exact(fd, lenbuf, 4) == 4, errc::adapter_broken, "truncated frame length");
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= uint32_t(lenbuf[i]) << (8 * i);
  if (len == 0) return FrameStatus::shutdown;
  require(len % 8 == 0, errc::adapter_broken, "frame length not a multiple of 8");

  std::vector<uint8_t> raw(len);
  require(read_exact(fd, raw.data(), len) == len, errc::adapter_broken, "truncated frame body");
  payload.resize(len / 8);
  for (size_t i = 0; i < payload.size(); ++i) {
    uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= uint64_t(raw[8 * i + size_t(b)]) << (8 * b);
    payload[i] = std::bit_cast<double>(bits);
  }
  return FrameStatus::ok;
}

void write_frame(int fd, const double* data, size_t count) {
  std::vector<uint8_t> out(8 + count * 8);
  std::memcpy(out.data(), kFrameMagic, 4);
  const uint32_t len = uint32_t(count * 8);
  for (int i = 0; i < 4; ++i) out[4 + size_t(i)] = uint8_t(len >> (8 * i));
  for (size_t i = 0; i < count; ++i) {
    const uint64_t bits = std::bit_cast<uint64_t>(data[i]);
    for (int b = 0; b < 8; ++b) out[8 + 8 * i + size_t(b)] = uint8_t(bits >> (8 * b));
  }
  write_all(fd, out.data(), out.size());
}

void write_shutdown(int fd) {
  uint8_t out[8];
  std::memcpy(out, kFrameMagic, 4);
  std::memset(out + 4, 0, 4);
  write_all(fd, out, 8);
}

std::string read_line(int fd, int timeout_ms) {
  std::string line;
  for (;;) {
    if (timeout_ms > 0) {
      pollfd pfd{fd, POLLIN, 0};
      const int r = ::poll(&pfd, 1, timeout_ms);
      require(r >= 0, errc::io_error, "poll failed");
      require(r > 0, errc::adapter_init_error, "timeout waiting for adapter handshake");
    }
    char c;
    const ssize_t r = ::read(fd, &c, 1);
    if (r < 0) {
      if (errno == EINTR) continue;
      raise(errc::io_error, std::string("read failed: ") + std::strerror(errno));
    }
    require(r != 0, errc::adapter_init_error, "adapter closed stream before handshake");
    if (c == '\n') return line;
    line.push_back(c);
    require(line.size() < 1 << 20, errc::adapter_init_error, "handshake line too long");
  }
}

}  // namespace esmg::wire
