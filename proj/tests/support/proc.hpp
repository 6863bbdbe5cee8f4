#pragma once

#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace testsupport {

struct CmdResult {
  int status = -1;  // process exit code, or -1 when it did not exit normally
  std::string out;
};

// Runs a shell command, capturing stdout.  Pipelines report the exit status
// of their last stage, matching shell semantics.
inline CmdResult run_cmd(const std::string& cmd) {
  CmdResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int rc = pclose(p);
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  return r;
}

}  // namespace testsupport
