#include "esmg/subprocess_adapter.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <sstream>

#include "esmg/wire.hpp"

namespace esmg {

std::vector<std::string> split_command(const std::string& command) {
  std::istringstream ss(command);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

SubprocessAdapter::SubprocessAdapter(std::vector<std::string> argv, int handshake_timeout_ms)
    : grid_(GridSpec::regular(2, 4)) {
  require(!argv.empty(), errc::adapter_init_error, "empty adapter command");
  name_ = "subprocess:" + argv[0];

  int parent_to_child[2], child_to_parent[2];
  require(::pipe(parent_to_child) == 0 && ::pipe(child_to_parent) == 0, errc::io_error,
          "pipe() failed");

  pid_ = ::fork();
  require(pid_ >= 0, errc::io_error, "fork() failed");
  if (pid_ == 0) {
    ::dup2(parent_to_child[0], STDIN_FILENO);
    ::dup2(child_to_parent[1], STDOUT_FILENO);
    ::close(parent_to_child[0]);
    ::close(parent_to_child[1]);
    ::close(child_to_parent[0]);
    ::close(child_to_parent[1]);
    std::vector<char*> cargv;
    for (auto& a : argv) cargv.push_back(a.data());
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::close(parent_to_child[0]);
  ::close(child_to_parent[1]);
  to_child_ = parent_to_child[1];
  from_child_ = child_to_parent[0];
  // A dead child must surface as an I/O error, not kill the parent.
  ::signal(SIGPIPE, SIG_IGN);

  try {
    const std::string line = wire::read_line(from_child_, handshake_timeout_ms);
    const wire::Handshake h = wire::decode_handshake(line);
    grid_ = GridSpec::regular(h.nlat, h.nlon);
    for (const auto& v : h.variables) variables_.push_back({v, ""});
    dt_s_ = h.dt_seconds;
    deterministic_ = h.deterministic;
  } catch (...) {
    shutdown();
    throw;
  }
}

SubprocessAdapter::~SubprocessAdapter() { shutdown(); }

void SubprocessAdapter::shutdown() noexcept {
  if (pid_ < 0) return;
  if (to_child_ >= 0) {
    try {
      wire::write_shutdown(to_child_);
    } catch (...) {
    }
    ::close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    ::close(from_child_);
    from_child_ = -1;
  }
  // Reap; escalate to SIGKILL if the child ignores the shutdown frame.
  for (int i = 0; i < 100; ++i) {
    const pid_t r = ::waitpid(pid_, nullptr, WNOHANG);
    if (r == pid_ || r < 0) {
      pid_ = -1;
      return;
    }
    ::usleep(10 * 1000);
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

StateFrame SubprocessAdapter::step(const StateFrame& state) {
  require(pid_ >= 0, errc::adapter_broken, "adapter already shut down");
  require(state.size() == variables_.size(), errc::shape_mismatch,
          "state frame has wrong variable count");
  const Eigen::Index ncell = grid_.ncell();
  for (const auto& f : state) {
    require(f.size() == ncell, errc::shape_mismatch, "state array size mismatch");
  }

  std::vector<double> payload(state.size() * size_t(ncell));
  for (size_t v = 0; v < state.size(); ++v) {
    std::memcpy(payload.data() + v * size_t(ncell), state[v].data(),
                size_t(ncell) * sizeof(double));
  }

  const std::string at_step = " at step " + std::to_string(steps_done_ + 1);
  try {
    wire::write_frame(to_child_, payload.data(), payload.size());
    std::vector<double> reply;
    const wire::FrameStatus st = wire::read_frame(from_child_, reply);
    require(st == wire::FrameStatus::ok, errc::adapter_broken,
            "adapter stream ended" + at_step);
    require(reply.size() == payload.size(), errc::adapter_broken,
            "reply frame has wrong size" + at_step);

    StateFrame next(state.size());
    for (size_t v = 0; v < state.size(); ++v) {
      next[v] = Eigen::Map<const Eigen::ArrayXd>(reply.data() + v * size_t(ncell), ncell);
    }
    ++steps_done_;
    return next;
  } catch (const Error& e) {
    if (e.code() == errc::io_error) {
      raise(errc::adapter_broken, std::string(e.what()) + at_step);
    }
    throw;
  }
}

}  // namespace esmg
