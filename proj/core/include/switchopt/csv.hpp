#pragma once

#include <string>

namespace switchopt {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars). All numeric CSV output uses this format.
std::string format_double(double v);

}  // namespace switchopt
