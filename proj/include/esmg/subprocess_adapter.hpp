#pragma once

#include <sys/types.h>

#include <string>
#include <vector>

#include "esmg/adapter.hpp"

namespace esmg {

/// Drives an external model over the stdin/stdout wire protocol. The child
/// is owned exclusively: destruction sends the shutdown frame and reaps it.
class SubprocessAdapter : public ModelAdapter {
 public:
  explicit SubprocessAdapter(std::vector<std::string> argv, int handshake_timeout_ms = 10000);
  ~SubprocessAdapter() override;

  SubprocessAdapter(const SubprocessAdapter&) = delete;
  SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

  const std::string& name() const override { return name_; }
  const GridSpec& grid() const override { return grid_; }
  const std::vector<VariableInfo>& variables() const override { return variables_; }
  double dt_seconds() const override { return dt_s_; }
  bool deterministic() const override { return deterministic_; }

  StateFrame step(const StateFrame& state) override;

 private:
  void shutdown() noexcept;

  std::string name_;
  GridSpec grid_;
  std::vector<VariableInfo> variables_;
  double dt_s_ = 0.0;
  bool deterministic_ = false;

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  long steps_done_ = 0;
};

/// Splits a command line on whitespace (no shell quoting).
std::vector<std::string> split_command(const std::string& command);

}  // namespace esmg
