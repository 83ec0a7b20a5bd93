#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "mosaic/analysis.hpp"
#include "mosaic/capture.hpp"
#include "mosaic/cohort.hpp"
#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/ingest.hpp"
#include "mosaic/render.hpp"
#include "mosaic/report.hpp"
#include "mosaic/synth.hpp"

namespace fs = std::filesystem;
using namespace mosaic;

namespace {

constexpr int kValidationError = 2;

capture::CaptureServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::set<std::string> parse_only(const std::string& list) {
  std::set<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto t = trim(cur);
    if (!t.empty()) {
      if (!analysis::is_analysis_name(t)) throw Error(Errc::invalid_argument, "unknown analysis " + t);
      out.insert(t);
    }
    cur.clear();
  };
  for (char c : list) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

// Either {"item": mean} or a cohort summary with class_averages.
std::map<std::string, double> read_class_means(const fs::path& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::schema_error, path.string() + " is not a JSON object");
  if (j.contains("class_averages")) j = j["class_averages"];
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw Error(Errc::schema_error, "class mean for " + k + " is not a number");
    out[k] = v.get<double>();
  }
  return out;
}

void emit(const std::string& out, const std::string& bytes) {
  if (out.empty() || out == "-") {
    std::cout << bytes;
  } else {
    write_file(out, bytes);
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal presentation feedback toolkit"};
  app.require_subcommand(1);
  core::LoadOptions load;

  auto* validate = app.add_subcommand("validate", "Load a bundle and report validation errors");
  std::string bundle;
  validate->add_option("bundle", bundle)->required();
  validate->add_flag("--sort-repair", load.sort_repair, "Stable-sort non-monotonic streams");
  validate->add_flag("--strict-roles", load.strict_roles, "Require one professor and two peers");

  auto* analyze = app.add_subcommand("analyze", "Run the analyses and write the analysis document");
  std::string only;
  std::string out;
  analyze->add_option("bundle", bundle)->required();
  analyze->add_option("--only", only, "Comma-separated analyses");
  analyze->add_option("-o,--output", out, "Output file (stdout when omitted)");
  analyze->add_flag("--sort-repair", load.sort_repair);

  auto* report = app.add_subcommand("report", "Build the feedback report");
  std::string format = "json";
  std::string class_file;
  report->add_option("bundle", bundle)->required();
  report->add_option("--format", format)->check(CLI::IsMember({"json", "md", "html"}));
  report->add_option("-o,--output", out);
  report->add_option("--only", only);
  report->add_option("--class", class_file, "Class means: {item: mean} or a cohort summary");
  report->add_flag("--sort-repair", load.sort_repair);

  auto* cohort = app.add_subcommand("cohort", "Summarize a directory of bundles");
  std::string dir;
  cohort->add_option("dir", dir)->required();
  cohort->add_option("-o,--output", out);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic bundle with ground truth");
  synth::SynthConfig cfg;
  std::string profile = "easy";
  synth->add_option("--seed", cfg.seed)->required();
  synth->add_option("-o,--output", out)->required();
  synth->add_option("--profile", profile)->check(CLI::IsMember({"easy", "noisy"}));
  synth->add_flag("--no-audio", [&](std::int64_t) { cfg.audio = false; });

  auto* capture = app.add_subcommand("capture", "Live capture service");
  capture->require_subcommand(1);
  auto* serve = capture->add_subcommand("serve", "Serve the capture API");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string rubric_file;
  std::string labels_file;
  capture::CaptureConfig ccfg;
  std::string token;
  std::string static_dir;
  serve->add_option("--port", port)->required();
  serve->add_option("--out", out)->required();
  serve->add_option("--rubric", rubric_file)->required();
  serve->add_option("--labels", labels_file)->required();
  serve->add_option("--host", host);
  serve->add_option("--session-id", ccfg.session_id);
  serve->add_option("--presenter", ccfg.presenter_id);
  serve->add_option("--token", token);
  serve->add_option("--static", static_dir, "Console assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }

  try {
    if (*validate) {
      const auto ctx = core::load_bundle(bundle, load);
      print_warnings(ctx.warnings);
      std::cout << "ok " << ctx.session.id << ": " << ctx.streams.size() << " streams, " << ctx.evaluations.size()
                << " evaluations, " << ctx.warnings.size() << " warnings\n";
    } else if (*analyze) {
      const auto ctx = core::load_bundle(bundle, load);
      analysis::AnalysisOptions opts;
      opts.only = parse_only(only);
      const auto set = analysis::run_analyses(ctx, opts);
      emit(out, report::dump(report::analysis_document(ctx, set)));
    } else if (*report) {
      const auto ctx = core::load_bundle(bundle, load);
      report::ReportOptions opts;
      opts.analyses.only = parse_only(only);
      if (!class_file.empty()) opts.class_means = read_class_means(class_file);
      const Json doc = report::build_report(ctx, opts);
      print_warnings(doc.value("warnings", std::vector<std::string>{}));
      emit(out, report::render(doc, format));
    } else if (*cohort) {
      emit(out, report::dump(cohort::cohort_summary(dir)));
    } else if (*synth) {
      cfg.profile = *synth::profile_from_string(profile);
      const Json manifest = synth::generate_session(out, cfg);
      std::cout << "wrote " << manifest["session_id"].get<std::string>() << " to " << out << '\n';
    } else if (*serve) {
      ccfg.out_dir = out;
      ccfg.rubric = ingest::parse_rubric(read_file(rubric_file));
      ccfg.labels = capture::parse_labels(read_file(labels_file));
      if (!token.empty()) ccfg.token = token;
      if (!static_dir.empty()) ccfg.static_dir = static_dir;
      capture::CaptureServer server(std::move(ccfg));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "capture listening on " << host << ':' << port << '\n';
      server.serve_forever(host, port);
      g_server = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::io_error ? 1 : kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
