#pragma once

#include <string>
#include <string_view>

namespace sphsemi {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Parses the full string as a double; throws DataError on trailing garbage.
double parse_double(std::string_view text);

}  // namespace sphsemi
