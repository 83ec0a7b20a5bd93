#include <catch_amalgamated.hpp>

#include "mosaic/error.hpp"
#include "mosaic/slides.hpp"
#include "mosaic/zip.hpp"

using namespace mosaic;
using namespace mosaic::slides;

namespace {

Errc code_of(std::string_view bytes) {
  try {
    parse_deck(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io_error;
}

}  // namespace

TEST_CASE("zip archives round-trip, stored and deflated") {
  const std::vector<std::pair<std::string, std::string>> entries = {{"a.txt", "hello"},
                                                                    {"dir/b.xml", std::string(5000, 'x')}};
  for (bool deflate : {true, false}) {
    const auto bytes = zip::write_archive(entries, deflate);
    const auto back = zip::read_archive(bytes);
    CHECK(back.at("a.txt") == "hello");
    CHECK(back.at("dir/b.xml").size() == 5000);
    CHECK(zip::write_archive(entries, deflate) == bytes);
  }
  CHECK_THROWS_AS(zip::read_archive("not a zip"), Error);
}

TEST_CASE("deck structure") {
  std::vector<SlideSpec> deck(3);
  deck[0].title = "Opening words";
  deck[0].paragraphs = {{{"one two three", 1800}}, {{"four", std::nullopt}}};
  deck[1].paragraphs = {{{"tiny text here", 1200}, {" and more", 2400}}};
  deck[1].images = 2;
  deck[1].slide_number = true;
  deck[2].title = "End";
  const auto d = parse_deck(write_deck(deck));
  REQUIRE(d.slide_count == 3);
  CHECK(d.slides[0].title == "Opening words");
  CHECK(d.slides[0].word_count == 6);
  CHECK(d.slides[0].min_font_pt == 18.0);
  CHECK(d.slides[1].title == std::nullopt);
  CHECK(d.slides[1].word_count == 5);
  CHECK(d.slides[1].image_count == 2);
  CHECK(d.slides[1].has_slide_number);
  CHECK(d.slides[1].min_font_pt == 12.0);
  CHECK(d.slides[2].word_count == 1);
  CHECK_FALSE(d.slides[2].min_font_pt);

  const auto f = deck_findings(d);
  CHECK(f.small_font_slides == 1);
  CHECK(f.slides[1].small_font);
  CHECK_FALSE(f.slides[0].small_font);  // exactly 18 pt is fine
  CHECK(f.missing_title_slides == 1);
  CHECK(f.numbered_slides == 1);
  CHECK(f.mean_words == Catch::Approx(4.0));
}

TEST_CASE("deck errors") {
  CHECK(code_of("plain text") == Errc::not_a_zip);
  CHECK(code_of(zip::write_archive({{"word/document.xml", "<w/>"}})) == Errc::not_a_presentation);
  const std::string pres =
      R"(<p:presentation xmlns:p="http://schemas.openxmlformats.org/presentationml/2006/main"/>)";
  CHECK(code_of(zip::write_archive({{"ppt/presentation.xml", pres}, {"ppt/slides/slide1.xml", "<p:sld><oops"}})) ==
        Errc::malformed_slide_xml);
}
