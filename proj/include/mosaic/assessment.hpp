#pragma once

// Rubric aggregation across roles, class averages and three-part feedback.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mosaic/types.hpp"
#include "mosaic/util.hpp"

namespace mosaic::assessment {

struct AssessmentConfig {
  double strength_min = 4.0;
  double improvement_max = 3.0;
  double divergence = 1.5;
};

struct ItemAggregate {
  std::string item_id;
  std::string title;
  std::optional<double> external_mean;  // professors and peers
  std::optional<double> professor_mean;
  std::optional<double> peer_mean;
  std::optional<double> self_score;
  double spread = 0.0;  // max - min external score
  bool divergent = false;
  std::size_t external_count = 0;
  std::map<std::string, std::vector<std::string>> comments;  // role -> non-empty comments, by evaluator id
};

struct RubricAggregates {
  std::string rubric_version;
  std::vector<ItemAggregate> items;  // rubric order
  std::size_t professors = 0;
  std::size_t peers = 0;
  std::size_t selves = 0;

  const ItemAggregate* find(std::string_view item_id) const noexcept;
};

// Throws NoExternalEvaluations.
RubricAggregates aggregate_rubric(std::span<const Evaluation> evaluations, const Rubric& rubric,
                                  const AssessmentConfig& cfg = {});

// Mean of per-session external means; sessions without the item are skipped.
std::map<std::string, double> class_averages(std::span<const RubricAggregates> sessions);

struct FeedbackEntry {
  std::string item_id;
  std::string evidence;
};

struct ActionEntry {
  std::string item_id;
  std::string recommendation;
  std::optional<std::string> metric;
  std::optional<double> metric_value;
};

struct FeedbackSections {
  std::vector<FeedbackEntry> strengths;
  std::vector<FeedbackEntry> improvements;
  std::vector<ActionEntry> action_plan;
  std::string provenance = "template";  // or "generated"
  std::string review_status = "draft";
  std::vector<std::string> warnings;
};

// Metric id ("analysis.key") -> value, as exposed by the analyses.
using MetricMap = std::map<std::string, double>;

// Abstract text generation service. The request and response documents are
// described in docs/generation-contract.md.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string generate(const std::string& request_json) = 0;
};

Json generation_request(const RubricAggregates& aggregates, const MetricMap& metrics, const Rubric& rubric);

// Parses and checks a generator response; nullopt when it breaks the contract.
std::optional<FeedbackSections> parse_generation_response(std::string_view response, const Rubric& rubric);

// Human-readable evidence for a metric value, e.g. "eye contact 31% of talk".
std::string describe_metric(const std::string& metric_id, double value);

// templates: {"items": {"<item>": {"strength": ..., "improvement": ..., "action": ...}}, "generic_action": ...}
// Placeholders {title}, {mean} and {metric} are substituted.
FeedbackSections compose_feedback(const RubricAggregates& aggregates, const MetricMap& metrics, const Rubric& rubric,
                                  const Json& templates, TextGenerator* generator = nullptr,
                                  const AssessmentConfig& cfg = {});

Json default_templates();

}  // namespace mosaic::assessment
