#ifndef KAMLAT_CLI_HPP
#define KAMLAT_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include "kamlat/errors.hpp"

namespace kamlat::cli {

// 0 ok, 1 config, 2 nonresonance violation, 3 KAM divergence,
// 4 nondegeneracy, 5 integration instability
int exit_code_for(ErrorKind k);

/// Parses and dispatches one command (args exclude the program name).
/// All output goes through the given streams; never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kamlat::cli

#endif
