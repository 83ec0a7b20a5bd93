#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mosaic/analysis.hpp"
#include "mosaic/biosignal.hpp"
#include "mosaic/cohort.hpp"
#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/render.hpp"
#include "mosaic/report.hpp"
#include "mosaic/speech.hpp"
#include "mosaic/synth.hpp"
#include "mosaic/vision.hpp"

namespace py = pybind11;
using namespace mosaic;

namespace {

core::LoadOptions load_options(bool sort_repair, bool strict_roles) {
  core::LoadOptions o;
  o.sort_repair = sort_repair;
  o.strict_roles = strict_roles;
  return o;
}

analysis::AnalysisOptions analysis_options(const std::vector<std::string>& only) {
  analysis::AnalysisOptions o;
  for (const auto& name : only) {
    if (!analysis::is_analysis_name(name)) throw Error(Errc::invalid_argument, "unknown analysis " + name);
    o.only.insert(name);
  }
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multimodal presentation feedback core";

  static py::exception<Error> exc(m, "MosaicError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(errc_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("validate", [](const std::filesystem::path& bundle, bool sort_repair, bool strict_roles) {
        return core::load_bundle(bundle, load_options(sort_repair, strict_roles)).warnings;
      },
      py::arg("bundle"), py::arg("sort_repair") = false, py::arg("strict_roles") = false);

  m.def("analyze_json", [](const std::filesystem::path& bundle, const std::vector<std::string>& only, bool sort_repair) {
        const auto ctx = core::load_bundle(bundle, load_options(sort_repair, false));
        return report::dump(report::analysis_document(ctx, analysis::run_analyses(ctx, analysis_options(only))));
      },
      py::arg("bundle"), py::arg("only") = std::vector<std::string>{}, py::arg("sort_repair") = false);

  m.def("report", [](const std::filesystem::path& bundle, const std::string& format, const std::vector<std::string>& only) {
        const auto ctx = core::load_bundle(bundle);
        report::ReportOptions opt;
        opt.analyses = analysis_options(only);
        return report::render(report::build_report(ctx, opt), format);
      },
      py::arg("bundle"), py::arg("format") = "json", py::arg("only") = std::vector<std::string>{});

  m.def("cohort_json", [](const std::filesystem::path& dir) { return report::dump(cohort::cohort_summary(dir)); },
        py::arg("dir"));

  m.def("synth_json", [](const std::filesystem::path& out, std::uint64_t seed, const std::string& profile, bool audio) {
        synth::SynthConfig cfg;
        cfg.seed = seed;
        const auto p = synth::profile_from_string(profile);
        if (!p) throw Error(Errc::invalid_argument, "profile must be easy or noisy");
        cfg.profile = *p;
        cfg.audio = audio;
        return report::dump(synth::generate_session(out, cfg));
      },
      py::arg("out"), py::arg("seed") = 42, py::arg("profile") = "easy", py::arg("audio") = true);

  m.def("t_test", [](const std::vector<double>& a, const std::vector<double>& b, const std::string& mode) {
        if (mode != "paired" && mode != "welch") throw Error(Errc::invalid_argument, "mode must be paired or welch");
        const auto r = biosignal::t_test(a, b, mode == "paired" ? biosignal::TestMode::paired : biosignal::TestMode::welch);
        return py::dict(py::arg("t") = r.t, py::arg("df") = r.df, py::arg("p") = r.p, py::arg("n1") = r.n1,
                        py::arg("n2") = r.n2);
      },
      py::arg("a"), py::arg("b"), py::arg("mode") = "paired");

  m.def("euler_from_rotation", [](const Mat3& r) {
        const auto pose = vision::euler_from_rotation(r);
        return py::make_tuple(pose.pitch, pose.yaw, pose.roll);
      },
      py::arg("matrix"), "Returns (pitch, yaw, roll) in degrees.");

  m.def("rotation_from_euler", [](double pitch, double yaw, double roll) {
        return vision::rotation_from_euler(HeadPose{pitch, yaw, roll});
      },
      py::arg("pitch"), py::arg("yaw"), py::arg("roll"));

  m.def("pitch_track", [](const std::vector<float>& samples, std::uint32_t sample_rate) {
        speech::AudioSignal s;
        s.samples = samples;
        s.sample_rate = sample_rate;
        std::vector<std::optional<double>> out;
        for (const auto& f : speech::audio_features(s)) out.push_back(f.voiced ? f.f0_hz : std::nullopt);
        return out;
      },
      py::arg("samples"), py::arg("sample_rate"), "F0 per 10 ms frame, None where unvoiced.");
}
