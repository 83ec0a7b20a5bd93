#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>

#include "mosaic/report.hpp"
#include "mosaic/util.hpp"
#include "support.hpp"

using namespace mosaic;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(MOSAIC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli end to end") {
  test::TempDir dir("cli");
  const auto bundle = (dir / "b").string();
  REQUIRE(run("synth --seed 3 --no-audio -o " + bundle) == 0);
  CHECK(run("validate " + bundle) == 0);
  CHECK(run("analyze " + bundle + " --only speech,slides -o " + (dir / "a.json").string()) == 0);
  const Json a = Json::parse(read_file(dir / "a.json"));
  CHECK(a["results"].size() == 8);
  for (const char* fmt : {"json", "md", "html"}) {
    CHECK(run("report " + bundle + " --format " + fmt + " -o " + (dir / (std::string("r.") + fmt)).string()) == 0);
  }
  CHECK(report::validate_report(Json::parse(read_file(dir / "r.json"))).empty());
  REQUIRE(run("synth --seed 4 --no-audio -o " + (dir / "c/b2").string()) == 0);
  std::filesystem::copy(bundle, dir / "c/b1", std::filesystem::copy_options::recursive);
  CHECK(run("cohort " + (dir / "c").string() + " -o " + (dir / "cohort.json").string()) == 0);
  CHECK(Json::parse(read_file(dir / "cohort.json"))["sessions"].size() == 2);
}

TEST_CASE("cli validation errors exit 2") {
  test::TempDir dir("cli-bad");
  CHECK(run("validate " + (dir / "missing").string()) == 2);
  CHECK(run("report " + (dir / "missing").string() + " --format pdf -o x") == 2);
  CHECK(run("analyze " + (dir / "missing").string() + " --only nothing -o x") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("synth --seed 1 --profile loud -o " + (dir / "x").string()) == 2);
}
