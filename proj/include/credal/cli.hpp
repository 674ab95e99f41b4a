#ifndef CREDAL_CLI_HPP
#define CREDAL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace credal {

/** Runs the command-line front end. Exit codes:
 *    0  success (consistent KB / report emitted)
 *    1  I/O, syntax or usage errors (message on err, no report)
 *    2  inconsistent knowledge base
 *    3  soundness violation found by `compare` (an implementation bug)
 */
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace credal

#endif
