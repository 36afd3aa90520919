#pragma once

#include <iosfwd>

namespace lppn {

//! Entry point of the lppn tool. Returns 0, 1 (configuration error) or 2 (assertion failure).
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lppn
