#include "mosaic/types.hpp"

#include <algorithm>
#include <cmath>

namespace mosaic {

bool is_rotation(const Mat3& m, double tol) noexcept {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) {
        dot += m[k][i] * m[k][j];
      }
      if (!std::isfinite(dot) || std::abs(dot - (i == j ? 1.0 : 0.0)) > tol) {
        return false;
      }
    }
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return std::abs(det - 1.0) <= tol;
}

std::string_view to_string(AnnotationKind kind) noexcept {
  switch (kind) {
    case AnnotationKind::instant: return "instant";
    case AnnotationKind::start: return "start";
    case AnnotationKind::end: return "end";
  }
  return "instant";
}

std::optional<AnnotationKind> annotation_kind_from_string(std::string_view text) noexcept {
  if (text == "instant") return AnnotationKind::instant;
  if (text == "start") return AnnotationKind::start;
  if (text == "end") return AnnotationKind::end;
  return std::nullopt;
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::professor: return "professor";
    case Role::peer: return "peer";
    case Role::self: return "self";
  }
  return "peer";
}

std::optional<Role> role_from_string(std::string_view text) noexcept {
  if (text == "professor") return Role::professor;
  if (text == "peer") return Role::peer;
  if (text == "self") return Role::self;
  return std::nullopt;
}

const RubricItem* Rubric::find(std::string_view item_id) const noexcept {
  auto it = std::find_if(items.begin(), items.end(), [&](const RubricItem& i) { return i.id == item_id; });
  return it == items.end() ? nullptr : &*it;
}

const ItemScore* Evaluation::find(std::string_view item_id) const noexcept {
  auto it = std::find_if(items.begin(), items.end(), [&](const ItemScore& i) { return i.item_id == item_id; });
  return it == items.end() ? nullptr : &*it;
}

double Evaluation::mean_score() const noexcept {
  if (items.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (const auto& i : items) {
    sum += i.score;
  }
  return sum / static_cast<double>(items.size());
}

}  // namespace mosaic
