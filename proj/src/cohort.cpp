#include "mosaic/cohort.hpp"

#include <algorithm>

#include "mosaic/analysis.hpp"
#include "mosaic/assessment.hpp"
#include "mosaic/biosignal.hpp"
#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/report.hpp"

namespace mosaic::cohort {

namespace fs = std::filesystem;

Json cohort_summary(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::invalid_argument, "not a directory: " + dir.string());
  std::vector<fs::path> roots;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "session.json")) roots.push_back(e.path());
  }
  std::sort(roots.begin(), roots.end());

  Json sessions = Json::array();
  std::vector<std::string> warnings;
  std::vector<assessment::RubricAggregates> aggregates;
  std::vector<double> opening;
  std::vector<double> conclusion;
  for (const auto& root : roots) {
    core::SessionContext ctx;
    try {
      ctx = core::load_bundle(root);
    } catch (const Error& e) {
      warnings.push_back(root.filename().string() + ": " + e.what());
      continue;
    }
    Json entry{{"id", ctx.session.id}, {"presenter_id", ctx.session.presenter_id}, {"item_means", Json::object()}};
    if (ctx.rubric && !ctx.evaluations.empty()) {
      try {
        auto agg = assessment::aggregate_rubric(ctx.evaluations, *ctx.rubric);
        for (const auto& i : agg.items) {
          if (i.external_mean) entry["item_means"][i.item_id] = *i.external_mean;
        }
        aggregates.push_back(std::move(agg));
      } catch (const Error& e) {
        warnings.push_back(ctx.session.id + ": " + e.what());
      }
    }
    analysis::AnalysisOptions only;
    only.only = {"heart"};
    const auto set = analysis::run_analyses(ctx, only);
    const auto o = set.metrics.find("heart.opening_mean");
    const auto c = set.metrics.find("heart.conclusion_mean");
    if (o != set.metrics.end() && c != set.metrics.end()) {
      entry["heart"] = {{"opening_mean", o->second}, {"conclusion_mean", c->second}};
      opening.push_back(o->second);
      conclusion.push_back(c->second);
    } else {
      entry["heart"] = nullptr;
    }
    sessions.push_back(entry);
  }
  if (sessions.empty()) throw Error(Errc::invalid_argument, "no loadable session bundles in " + dir.string());

  Json paired = nullptr;
  if (opening.size() >= 2) {
    try {
      const auto t = biosignal::t_test(opening, conclusion, biosignal::TestMode::paired);
      paired = {{"a", "opening"}, {"b", "conclusion"}, {"mode", "paired"}, {"t", t.t}, {"df", t.df}, {"p", t.p},
                {"n", t.n1}};
    } catch (const Error& e) {
      warnings.push_back(std::string("heart paired test: ") + e.what());
    }
  } else {
    warnings.push_back("heart paired test needs at least two sessions with opening and conclusion data");
  }
  return report::round_reals(Json{{"schema_version", 1},
                                  {"sessions", sessions},
                                  {"class_averages", assessment::class_averages(aggregates)},
                                  {"heart_paired", paired},
                                  {"warnings", warnings}});
}

}  // namespace mosaic::cohort
