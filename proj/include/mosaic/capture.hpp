#pragma once

// Live capture service: annotations, evaluator events and rubric submissions
// over HTTP, persisted in bundle format.

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mosaic/types.hpp"
#include "mosaic/util.hpp"

namespace mosaic::capture {

struct CaptureConfig {
  std::filesystem::path out_dir;
  Rubric rubric;
  std::vector<std::string> labels;  // phase:* labels are always accepted
  std::string session_id = "capture";
  std::string presenter_id = "presenter";
  Millis planned_duration_ms = 600000;
  Millis planned_qa_ms = 300000;
  std::optional<std::string> token;             // required as ?token= when set
  std::optional<std::filesystem::path> static_dir;  // console assets served at /
  std::function<Millis()> clock;                // monotonic ms; defaults to steady_clock
};

// Labels file: a JSON array of strings, or one label per line.
std::vector<std::string> parse_labels(std::string_view text);

class CaptureServer {
 public:
  explicit CaptureServer(CaptureConfig config);
  ~CaptureServer();
  CaptureServer(const CaptureServer&) = delete;
  CaptureServer& operator=(const CaptureServer&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port; the
  // bound port is returned. Throws IoError when binding fails.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from elsewhere.
  void serve_forever(const std::string& host, int port);
  void stop();
  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mosaic::capture
