#include "mosaic/slides.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cstdint>
#include <sstream>

#include "mosaic/error.hpp"
#include "mosaic/util.hpp"
#include "mosaic/zip.hpp"

namespace mosaic::slides {

namespace pt = boost::property_tree;

namespace {

std::string_view local(std::string_view name) {
  const auto colon = name.find(':');
  return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

const pt::ptree* child(const pt::ptree& node, std::string_view name) {
  for (const auto& [key, value] : node) {
    if (local(key) == name) {
      return &value;
    }
  }
  return nullptr;
}

std::optional<std::string> attr(const pt::ptree& node, const char* name) {
  if (auto a = node.get_child_optional("<xmlattr>")) {
    if (auto v = a->get_optional<std::string>(name)) {
      return *v;
    }
  }
  return std::nullopt;
}

std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) {
      ++n;
    }
    in_word = !space;
  }
  return n;
}

struct Walker {
  SlideInfo& slide;
  const DeckConfig& cfg;

  // Returns the paragraph texts of a text body and records its runs.
  std::vector<std::string> paragraphs(const pt::ptree& body) {
    std::vector<std::string> out;
    collect_paragraphs(body, out);
    return out;
  }

  void collect_paragraphs(const pt::ptree& node, std::vector<std::string>& out) {
    for (const auto& [key, value] : node) {
      const auto name = local(key);
      if (name == "<xmlattr>") {
        continue;
      }
      if (name == "p") {
        out.push_back(paragraph(value));
      } else {
        collect_paragraphs(value, out);
      }
    }
  }

  std::string paragraph(const pt::ptree& p) {
    std::string text;
    for (const auto& [key, value] : p) {
      const auto name = local(key);
      if (name == "br") {
        text += '\n';
      } else if (name == "fld") {
        if (attr(value, "type").value_or("") == "slidenum") {
          slide.has_slide_number = true;
        }
      } else if (name == "r") {
        TextRun run;
        run.font_pt = cfg.default_font_pt;
        if (const auto* t = child(value, "t")) {
          run.text = t->data();
        }
        if (const auto* rpr = child(value, "rPr")) {
          if (auto sz = attr(*rpr, "sz")) {
            const double pt_size = std::stod(*sz) / 100.0;
            if (pt_size > 0.0) {
              run.font_pt = pt_size;
              run.inherited = false;
            }
          }
        }
        text += run.text;
        slide.text_runs.push_back(std::move(run));
      }
    }
    return text;
  }

  static std::optional<Box> box_of(const pt::ptree& sp) {
    const auto* sppr = child(sp, "spPr");
    const auto* xfrm = sppr ? child(*sppr, "xfrm") : nullptr;
    if (!xfrm) {
      return std::nullopt;
    }
    Box b;
    if (const auto* off = child(*xfrm, "off")) {
      b.x = std::stoll(attr(*off, "x").value_or("0"));
      b.y = std::stoll(attr(*off, "y").value_or("0"));
    }
    if (const auto* ext = child(*xfrm, "ext")) {
      b.cx = std::stoll(attr(*ext, "cx").value_or("0"));
      b.cy = std::stoll(attr(*ext, "cy").value_or("0"));
    }
    return b;
  }

  void shape(const pt::ptree& sp) {
    std::string ph_type;
    bool placeholder = false;
    if (const auto* nv = child(sp, "nvSpPr")) {
      if (const auto* nvpr = child(*nv, "nvPr")) {
        if (const auto* ph = child(*nvpr, "ph")) {
          placeholder = true;
          ph_type = attr(*ph, "type").value_or("obj");
        }
      }
    }
    if (placeholder && ph_type == "sldNum") {
      slide.has_slide_number = true;
      slide.slide_number_box = box_of(sp);
      return;
    }
    const auto* body = child(sp, "txBody");
    if (!body) {
      return;
    }
    const auto paras = paragraphs(*body);
    for (const auto& p : paras) {
      slide.word_count += count_words(p);
    }
    if (placeholder && (ph_type == "title" || ph_type == "ctrTitle") && !slide.title) {
      std::string title;
      for (const auto& p : paras) {
        const auto t = trim(p);
        if (!t.empty()) {
          title += title.empty() ? t : " " + t;
        }
      }
      if (!title.empty()) {
        slide.title = title;
      }
    }
  }

  void tree(const pt::ptree& node) {
    for (const auto& [key, value] : node) {
      const auto name = local(key);
      if (name == "<xmlattr>") {
        continue;
      }
      if (name == "sp") {
        shape(value);
      } else if (name == "pic") {
        ++slide.image_count;
      } else if (name == "graphicFrame") {
        for (const auto& p : paragraphs(value)) {
          slide.word_count += count_words(p);
        }
      } else {
        tree(value);
      }
    }
  }
};

int slide_number_of(const std::string& name) {
  constexpr std::string_view prefix = "ppt/slides/slide";
  constexpr std::string_view suffix = ".xml";
  if (!name.starts_with(prefix) || !name.ends_with(suffix)) {
    return 0;
  }
  const std::string_view digits(name.data() + prefix.size(), name.size() - prefix.size() - suffix.size());
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return 0;
  }
  return std::stoi(std::string(digits));
}

}  // namespace

DeckStructure parse_deck(std::string_view bytes, const DeckConfig& cfg) {
  const auto parts = zip::read_archive(bytes);
  if (!parts.contains("ppt/presentation.xml")) {
    throw Error(Errc::not_a_presentation, "missing ppt/presentation.xml");
  }
  std::vector<std::pair<int, const std::string*>> slide_parts;
  for (const auto& [name, content] : parts) {
    if (const int n = slide_number_of(name); n > 0) {
      slide_parts.emplace_back(n, &content);
    }
  }
  if (slide_parts.empty()) {
    throw Error(Errc::not_a_presentation, "no slides");
  }
  std::sort(slide_parts.begin(), slide_parts.end());
  DeckStructure deck;
  for (const auto& [n, content] : slide_parts) {
    pt::ptree tree;
    std::istringstream in(*content);
    SlideInfo info;
    info.index = static_cast<int>(deck.slides.size()) + 1;
    try {
      pt::read_xml(in, tree);
      Walker{info, cfg}.tree(tree);
    } catch (const pt::ptree_error& e) {
      throw Error(Errc::malformed_slide_xml, "slide " + std::to_string(n) + ": " + e.what());
    } catch (const std::logic_error& e) {  // numeric attribute conversion
      throw Error(Errc::malformed_slide_xml, "slide " + std::to_string(n) + ": " + e.what());
    }
    for (const auto& r : info.text_runs) {
      if (!r.inherited) {
        info.min_font_pt = info.min_font_pt ? std::min(*info.min_font_pt, r.font_pt) : r.font_pt;
      }
    }
    deck.slides.push_back(std::move(info));
  }
  deck.slide_count = deck.slides.size();
  return deck;
}

DeckFindings deck_findings(const DeckStructure& deck, const FindingsConfig& cfg) {
  DeckFindings f;
  std::size_t words = 0;
  std::size_t images = 0;
  for (const auto& s : deck.slides) {
    SlideFindings sf;
    sf.index = s.index;
    sf.small_font = std::any_of(s.text_runs.begin(), s.text_runs.end(),
                                [&](const TextRun& r) { return !r.inherited && r.font_pt < cfg.min_font_pt; });
    sf.text_dense = s.word_count > cfg.max_words;
    sf.missing_title = !s.title.has_value();
    sf.no_slide_number = !s.has_slide_number;
    f.small_font_slides += sf.small_font ? 1 : 0;
    f.text_dense_slides += sf.text_dense ? 1 : 0;
    f.missing_title_slides += sf.missing_title ? 1 : 0;
    f.numbered_slides += s.has_slide_number ? 1 : 0;
    words += s.word_count;
    images += s.image_count;
    f.slides.push_back(sf);
  }
  if (!deck.slides.empty()) {
    f.mean_words = static_cast<double>(words) / static_cast<double>(deck.slides.size());
  }
  f.image_text_ratio = words > 0 ? static_cast<double>(images) / static_cast<double>(words) : 0.0;
  return f;
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kNs =
    R"(xmlns:a="http://schemas.openxmlformats.org/drawingml/2006/main" )"
    R"(xmlns:r="http://schemas.openxmlformats.org/officeDocument/2006/relationships" )"
    R"(xmlns:p="http://schemas.openxmlformats.org/presentationml/2006/main")";

std::string run_xml(const RunSpec& r) {
  std::string s = "<a:r><a:rPr lang=\"en-US\"";
  if (r.size_hundredths) {
    s += " sz=\"" + std::to_string(*r.size_hundredths) + "\"";
  }
  s += "/><a:t>" + escape(r.text) + "</a:t></a:r>";
  return s;
}

std::string slide_xml(const SlideSpec& spec) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
  s += std::string("<p:sld ") + kNs + "><p:cSld><p:spTree>";
  s += "<p:nvGrpSpPr><p:cNvPr id=\"1\" name=\"\"/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr><p:grpSpPr/>";
  int id = 2;
  if (spec.title) {
    s += "<p:sp><p:nvSpPr><p:cNvPr id=\"" + std::to_string(id++) +
         "\" name=\"Title\"/><p:cNvSpPr/><p:nvPr><p:ph type=\"title\"/></p:nvPr></p:nvSpPr><p:spPr/>";
    s += "<p:txBody><a:bodyPr/><a:p>" + run_xml({*spec.title, std::nullopt}) + "</a:p></p:txBody></p:sp>";
  }
  if (!spec.paragraphs.empty()) {
    s += "<p:sp><p:nvSpPr><p:cNvPr id=\"" + std::to_string(id++) +
         "\" name=\"Content\"/><p:cNvSpPr/><p:nvPr><p:ph idx=\"1\"/></p:nvPr></p:nvSpPr><p:spPr/><p:txBody><a:bodyPr/>";
    for (const auto& para : spec.paragraphs) {
      s += "<a:p>";
      for (const auto& r : para) {
        s += run_xml(r);
      }
      s += "</a:p>";
    }
    s += "</p:txBody></p:sp>";
  }
  for (std::size_t i = 0; i < spec.images; ++i) {
    s += "<p:pic><p:nvPicPr><p:cNvPr id=\"" + std::to_string(id++) +
         "\" name=\"Picture\"/><p:cNvPicPr/><p:nvPr/></p:nvPicPr><p:blipFill><a:blip r:embed=\"rIdImg\"/></p:blipFill>"
         "<p:spPr/></p:pic>";
  }
  if (spec.slide_number) {
    s += "<p:sp><p:nvSpPr><p:cNvPr id=\"" + std::to_string(id++) +
         "\" name=\"Slide Number\"/><p:cNvSpPr/><p:nvPr><p:ph type=\"sldNum\" sz=\"quarter\" idx=\"12\"/></p:nvPr>"
         "</p:nvSpPr><p:spPr><a:xfrm><a:off x=\"8610600\" y=\"6356350\"/><a:ext cx=\"2743200\" cy=\"365125\"/></a:xfrm>"
         "</p:spPr><p:txBody><a:bodyPr/><a:p><a:fld id=\"{B6F15528-21DE-4FAA-801E-634DDDAF4B2B}\" type=\"slidenum\">"
         "<a:t>&lt;#&gt;</a:t></a:fld></a:p></p:txBody></p:sp>";
  }
  s += "</p:spTree></p:cSld></p:sld>\n";
  return s;
}

}  // namespace

std::string write_deck(const std::vector<SlideSpec>& slides) {
  std::vector<std::pair<std::string, std::string>> parts;
  std::string types =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
      "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
      "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
      "<Override PartName=\"/ppt/presentation.xml\" "
      "ContentType=\"application/vnd.openxmlformats-officedocument.presentationml.presentation.main+xml\"/>";
  for (std::size_t i = 1; i <= slides.size(); ++i) {
    types += "<Override PartName=\"/ppt/slides/slide" + std::to_string(i) +
             ".xml\" ContentType=\"application/vnd.openxmlformats-officedocument.presentationml.slide+xml\"/>";
  }
  types += "</Types>\n";
  parts.emplace_back("[Content_Types].xml", types);
  parts.emplace_back("_rels/.rels",
                     "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
                     "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
                     "<Relationship Id=\"rId1\" "
                     "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument\" "
                     "Target=\"ppt/presentation.xml\"/></Relationships>\n");
  std::string pres = std::string("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n<p:presentation ") +
                     kNs + "><p:sldIdLst>";
  std::string rels =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">";
  for (std::size_t i = 1; i <= slides.size(); ++i) {
    pres += "<p:sldId id=\"" + std::to_string(255 + i) + "\" r:id=\"rId" + std::to_string(i) + "\"/>";
    rels += "<Relationship Id=\"rId" + std::to_string(i) +
            "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/slide\" "
            "Target=\"slides/slide" +
            std::to_string(i) + ".xml\"/>";
  }
  pres += "</p:sldIdLst><p:sldSz cx=\"12192000\" cy=\"6858000\"/></p:presentation>\n";
  rels += "</Relationships>\n";
  parts.emplace_back("ppt/presentation.xml", pres);
  parts.emplace_back("ppt/_rels/presentation.xml.rels", rels);
  for (std::size_t i = 0; i < slides.size(); ++i) {
    parts.emplace_back("ppt/slides/slide" + std::to_string(i + 1) + ".xml", slide_xml(slides[i]));
  }
  return zip::write_archive(parts);
}

}  // namespace mosaic::slides
