#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace torusperc::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kNumeric = 3 };

/// Default output directory when --out is omitted.
inline constexpr const char* kOutDirEnv = "TORUSPERC_OUT_DIR";

/// Parses "a,b,c", "lin:a:b:n" or "log:a:b:n" (n points, endpoints included).
[[nodiscard]] std::vector<double> parse_grid(std::string_view text);

/// Entry point behind the `torusperc` executable. `args` excludes the program
/// name. Results go to --out (or `out`), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusperc::cli
