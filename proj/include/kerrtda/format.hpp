#pragma once

#include <string>

namespace kerrtda {

// Shortest decimal that round-trips to the same double; integral values keep a
// trailing ".0" and infinities print as "inf" / "-inf".
std::string format_double(double value);

}  // namespace kerrtda
