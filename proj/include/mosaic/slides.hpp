#pragma once

// Structure of a .pptx deck: titles, text density, images, fonts, slide numbers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mosaic::slides {

struct TextRun {
  std::string text;
  double font_pt = 18.0;
  bool inherited = true;  // no explicit size on the run
};

// Placeholder geometry in EMU.
struct Box {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t cx = 0;
  std::int64_t cy = 0;
};

struct SlideInfo {
  int index = 1;
  std::optional<std::string> title;
  std::size_t word_count = 0;
  std::size_t image_count = 0;
  bool has_slide_number = false;
  std::optional<Box> slide_number_box;
  std::optional<double> min_font_pt;  // explicit sizes only
  std::vector<TextRun> text_runs;
};

struct DeckStructure {
  std::size_t slide_count = 0;
  std::vector<SlideInfo> slides;
};

struct DeckConfig {
  double default_font_pt = 18.0;
};

// Throws NotAZip, NotAPresentation, MalformedSlideXml.
DeckStructure parse_deck(std::string_view bytes, const DeckConfig& cfg = {});

struct FindingsConfig {
  double min_font_pt = 18.0;
  std::size_t max_words = 40;
};

struct SlideFindings {
  int index = 1;
  bool small_font = false;
  bool text_dense = false;
  bool missing_title = false;
  bool no_slide_number = false;
};

struct DeckFindings {
  std::vector<SlideFindings> slides;
  double mean_words = 0.0;
  double image_text_ratio = 0.0;  // images per word over the deck
  std::size_t small_font_slides = 0;
  std::size_t text_dense_slides = 0;
  std::size_t missing_title_slides = 0;
  std::size_t numbered_slides = 0;
};

DeckFindings deck_findings(const DeckStructure& deck, const FindingsConfig& cfg = {});

// Deck writer for fixtures and synthetic bundles.
struct RunSpec {
  std::string text;
  std::optional<int> size_hundredths;  // e.g. 1800 for 18 pt
};

struct SlideSpec {
  std::optional<std::string> title;
  std::vector<std::vector<RunSpec>> paragraphs;
  std::size_t images = 0;
  bool slide_number = false;
};

std::string write_deck(const std::vector<SlideSpec>& slides);

}  // namespace mosaic::slides
