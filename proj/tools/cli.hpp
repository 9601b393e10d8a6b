// cli.hpp: subcommand runner behind the commonbath executable
//
//   commonbath interaction     delta,n,h_int
//   commonbath concurrence     tau,delta,theta,concurrence
//   commonbath onset           tau,delta,f_correction,h_f,h_total
//   commonbath populations     tau plus re/im of the 16 computational-basis entries
//   commonbath oracle-compare  tau,dev_brute_exact,dev_exact_continuum
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 oracle deviation above --tolerance.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commonbath::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidation = 1,
    kNumerical = 2,
    kOracleTolerance = 3,
};

// CSV goes to --output when given, otherwise to out. Diagnostics and the
// oracle summary go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace commonbath::cli
