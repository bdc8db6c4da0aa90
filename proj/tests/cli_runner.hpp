#pragma once

// Runs the command-line tool through the shell and captures stdout and the exit code.

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace cli {

struct Result {
  int code = -1;
  std::string out;
};

inline const std::string kData = INFOKERNEL_TEST_DIR "/data/";

/// `args` is appended verbatim; `threads` > 0 sets INFOKERNEL_THREADS.
inline Result run(const std::string& args, int threads = 0) {
  std::string cmd;
  if (threads > 0) cmd = "INFOKERNEL_THREADS=" + std::to_string(threads) + " ";
  cmd += std::string("'") + INFOKERNEL_CLI + "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string config(const std::string& name) { return "--config '" + kData + name + "'"; }

}  // namespace cli
