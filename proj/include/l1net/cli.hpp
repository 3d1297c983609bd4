#pragma once

namespace l1net {

// Full command-line entry point; returns the process exit code
// (0 ok, 1 runtime failure, 2 configuration error).
int cli_main(int argc, char** argv);

}  // namespace l1net
