#pragma once

#include <string>

namespace confound {

/// %.12g with negative zero printed as "0".
std::string format_number(double v);

}  // namespace confound
