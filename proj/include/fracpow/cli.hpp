#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracpow {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericExhaustion = 3;
}  // namespace exit_code

/// Runs `fracpow <subcommand> ...`; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracpow
