#pragma once

#include <string>
#include <string_view>

#include "mosaic/util.hpp"

namespace mosaic::report {

// format is json, md or html; throws UnsupportedFormat otherwise. The html
// output is a single self-contained file.
std::string render(const Json& report, std::string_view format);

}  // namespace mosaic::report
