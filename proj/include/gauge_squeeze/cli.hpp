#pragma once

#include <iosfwd>

namespace gauge_squeeze {

// Exit status: 0 success, 1 usage/config/I-O error, 2 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gauge_squeeze
