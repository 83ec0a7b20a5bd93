#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mosaic {

enum class Errc {
  missing_descriptor,
  missing_stream_file,
  stream_parse_error,
  non_monotonic_timestamps,
  unknown_stream,
  unpaired_phase_marker,
  role_requirement,
  schema_error,
  encoding_error,
  missing_item,
  score_out_of_range,
  not_a_rotation,
  empty_stream,
  insufficient_landmarks,
  degenerate_sample,
  unsupported_encoding,
  corrupt_header,
  no_voiced_frames,
  not_a_zip,
  not_a_presentation,
  malformed_slide_xml,
  no_external_evaluations,
  schema_violation,
  unsupported_format,
  invalid_argument,
  io_error,
};

// Stable CamelCase name used in messages and machine-readable output.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail);
  Error(Errc code, std::string detail, std::size_t line, std::string field = {});

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  // Set for errors tied to a position in an input file (1-based); 0 means none.
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Errc code_;
  std::string detail_;
  std::optional<std::size_t> line_;
  std::string field_;
};

}  // namespace mosaic
