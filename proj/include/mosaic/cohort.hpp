#pragma once

// Class-level view over a directory of session bundles.

#include <filesystem>

#include "mosaic/util.hpp"

namespace mosaic::cohort {

// Every immediate subdirectory holding a session.json is a session. Output:
// {"schema_version", "sessions": [...], "class_averages": {item: mean},
//  "heart_paired": {...} | null, "warnings": [...]}.
// Bundles that fail to load are listed in warnings and skipped; throws
// InvalidArgument when none loads.
Json cohort_summary(const std::filesystem::path& dir);

}  // namespace mosaic::cohort
