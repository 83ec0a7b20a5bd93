#pragma once

// Domain records shared across modules: time base, rotation primitives,
// annotations, rubric and evaluation documents.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mosaic {

// Session clock: integer milliseconds from presentation start.
using Millis = std::int64_t;

using Mat3 = std::array<std::array<double, 3>, 3>;

// Degrees. Intrinsic order yaw (vertical axis), pitch (lateral axis), roll
// (frontal axis). Pitch > 0 looks up, yaw > 0 turns to the presenter's left,
// roll > 0 tilts the head clockwise as seen by the audience.
struct HeadPose {
  double pitch = 0.0;
  double yaw = 0.0;
  double roll = 0.0;

  friend bool operator==(const HeadPose&, const HeadPose&) = default;
};

// Orthonormal with determinant +1, element-wise within tol.
bool is_rotation(const Mat3& m, double tol = 1e-6) noexcept;

enum class AnnotationKind { instant, start, end };

std::string_view to_string(AnnotationKind kind) noexcept;
std::optional<AnnotationKind> annotation_kind_from_string(std::string_view text) noexcept;

struct Annotation {
  std::string id;
  std::string label;  // e.g. nervous_movement, reading_notes, eye_contact, phase:opening
  AnnotationKind kind = AnnotationKind::instant;
  Millis ts_ms = 0;
  std::string source;
  std::optional<Millis> client_ts_ms;  // diagnostics only

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class Role { professor, peer, self };

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view text) noexcept;

struct RubricItem {
  std::string id;
  std::string title;
  std::array<std::string, 5> levels;  // descriptions for scores 1..5
  std::optional<std::string> phase;   // presentation phase the item assesses
  std::optional<std::string> metric_link;  // e.g. "headpose.eye_contact_ratio"

  friend bool operator==(const RubricItem&, const RubricItem&) = default;
};

struct Rubric {
  std::string version;
  std::vector<RubricItem> items;

  const RubricItem* find(std::string_view item_id) const noexcept;
  friend bool operator==(const Rubric&, const Rubric&) = default;
};

struct ItemScore {
  std::string item_id;
  int score = 0;  // Likert 1..5
  std::string comment;

  friend bool operator==(const ItemScore&, const ItemScore&) = default;
};

struct Evaluation {
  std::string evaluator_id;
  Role role = Role::peer;
  std::string session_id;
  int version = 1;
  std::vector<ItemScore> items;  // rubric order
  std::vector<std::string> empty_comment_items;

  const ItemScore* find(std::string_view item_id) const noexcept;
  double mean_score() const noexcept;
  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

}  // namespace mosaic
