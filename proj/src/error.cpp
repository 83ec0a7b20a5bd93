#include "mosaic/error.hpp"

namespace mosaic {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::missing_descriptor: return "MissingDescriptor";
    case Errc::missing_stream_file: return "MissingStreamFile";
    case Errc::stream_parse_error: return "StreamParseError";
    case Errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case Errc::unknown_stream: return "UnknownStream";
    case Errc::unpaired_phase_marker: return "UnpairedPhaseMarker";
    case Errc::role_requirement: return "RoleRequirement";
    case Errc::schema_error: return "SchemaError";
    case Errc::encoding_error: return "EncodingError";
    case Errc::missing_item: return "MissingItem";
    case Errc::score_out_of_range: return "ScoreOutOfRange";
    case Errc::not_a_rotation: return "NotARotation";
    case Errc::empty_stream: return "EmptyStream";
    case Errc::insufficient_landmarks: return "InsufficientLandmarks";
    case Errc::degenerate_sample: return "DegenerateSample";
    case Errc::unsupported_encoding: return "UnsupportedEncoding";
    case Errc::corrupt_header: return "CorruptHeader";
    case Errc::no_voiced_frames: return "NoVoicedFrames";
    case Errc::not_a_zip: return "NotAZip";
    case Errc::not_a_presentation: return "NotAPresentation";
    case Errc::malformed_slide_xml: return "MalformedSlideXml";
    case Errc::no_external_evaluations: return "NoExternalEvaluations";
    case Errc::schema_violation: return "SchemaViolation";
    case Errc::unsupported_format: return "UnsupportedFormat";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& detail, std::optional<std::size_t> line,
                    const std::string& field) {
  std::string msg{errc_name(code)};
  msg += '(';
  msg += detail;
  if (line) {
    msg += ", line " + std::to_string(*line);
  }
  if (!field.empty()) {
    msg += ", field \"" + field + '"';
  }
  msg += ')';
  return msg;
}

}  // namespace

Error::Error(Errc code, std::string detail)
    : std::runtime_error(compose(code, detail, std::nullopt, {})),
      code_(code),
      detail_(std::move(detail)) {}

Error::Error(Errc code, std::string detail, std::size_t line, std::string field)
    : std::runtime_error(compose(code, detail, line ? std::optional(line) : std::nullopt, field)),
      code_(code),
      detail_(std::move(detail)),
      line_(line ? std::optional(line) : std::nullopt),
      field_(std::move(field)) {}

}  // namespace mosaic
