#pragma once

#include <string>

namespace wpart {

/// Shortest text that parses back to the same double ("1", "0.25", "1e-07").
std::string shortest(double x);

/// Locale-independent %.{digits}g formatting.
std::string significant(double x, int digits = 17);

/// e^log_value as decimal text: the plain double when it is finite,
/// otherwise "m.mmme+EEEE" built from log10.
std::string exp_of_log(double log_value, int digits = 17);

}  // namespace wpart
