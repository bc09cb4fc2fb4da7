#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <string>
#include <vector>

namespace cli {

struct Run {
  int code = -1;
  std::string out;
};

inline std::string quote(const std::string& a) {
  std::string q = "'";
  for (char c : a) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the built binary with stderr folded into stdout.
inline Run run(const std::vector<std::string>& args) {
  std::string cmd = quote(ICOMP_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline bool has(const Run& r, const std::string& needle) { return r.out.find(needle) != std::string::npos; }

}  // namespace cli
