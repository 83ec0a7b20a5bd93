#pragma once

// JSON Schema validation for the subset of keywords our published schemas use:
// type, const, enum, properties, required, additionalProperties, items,
// minItems, maxItems, minimum, maximum, minLength, anyOf and local $ref.

#include <string>
#include <vector>

#include "mosaic/util.hpp"

namespace mosaic::schema {

struct Violation {
  std::string path;  // JSON pointer into the instance
  std::string message;
};

std::vector<Violation> validate(const Json& schema, const Json& instance);

}  // namespace mosaic::schema
