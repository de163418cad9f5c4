// The causalplan command line: check, ground, plan, predict, validate, demo.

#ifndef CAUSALPLAN_TOOLS_CLI_H_
#define CAUSALPLAN_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace causalplan {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoPlan = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitError = 3;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace causalplan

#endif  // CAUSALPLAN_TOOLS_CLI_H_
