#pragma once

// Minimal ZIP container support: stored and deflated entries, no encryption,
// no ZIP64. Enough for office documents.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mosaic::zip {

// Entry name -> uncompressed bytes. Throws NotAZip.
std::map<std::string, std::string> read_archive(std::string_view bytes);

// Entries are written in the given order with a fixed timestamp, so equal
// input gives equal bytes.
std::string write_archive(const std::vector<std::pair<std::string, std::string>>& entries, bool deflate = true);

}  // namespace mosaic::zip
