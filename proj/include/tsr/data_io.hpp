#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsr/tensor.hpp"

namespace tsr {

struct BBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool operator==(const BBox&) const = default;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool valid() const { return x0 < x1 && y0 < y1; }
};

struct TextBlock {
  BBox bbox;
  std::string text;

  double center_x() const { return 0.5 * (bbox.x0 + bbox.x1); }
  double center_y() const { return 0.5 * (bbox.y0 + bbox.y1); }
};

enum class SplitTag { train, val, test };

inline SplitTag split_tag_from(const std::string& s) {
  if (s == "train") return SplitTag::train;
  if (s == "val" || s == "validation") return SplitTag::val;
  if (s == "test") return SplitTag::test;
  fail("unknown split tag: " + s);
}

inline const char* split_tag_name(SplitTag t) {
  switch (t) {
    case SplitTag::train: return "train";
    case SplitTag::val: return "val";
    case SplitTag::test: return "test";
  }
  return "?";
}

struct CellAnnotation {
  std::vector<std::string> tokens;
  std::optional<BBox> bbox;  // absent for empty cells

  std::string content() const {
    std::string out;
    for (const auto& t : tokens) {
      // Inline markup tokens carry no text.
      if (t.size() >= 2 && t.front() == '<' && t.back() == '>') continue;
      out += t;
    }
    return out;
  }
};

struct AnnotationRecord {
  std::string image_id;
  std::string image_path;
  std::vector<std::string> structure_tokens;
  std::vector<CellAnnotation> cells;
  SplitTag split_tag = SplitTag::train;
};

inline bool is_cell_open_token(const std::string& tok) {
  return tok == "<td>" || tok == "<td";
}

/// Thrown for a single bad line; carries the 1-based line number.
struct RecordError : std::runtime_error {
  int line_no;
  RecordError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

namespace detail {

inline BBox bbox_from_json(const nlohmann::json& j) {
  check(j.is_array() && j.size() == 4, "bbox must be [x0,y0,x1,y1]");
  BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  check(b.valid(), "bbox with non-positive extent");
  return b;
}

inline AnnotationRecord record_from_json(const nlohmann::json& j, const std::string& image_root) {
  AnnotationRecord rec;
  rec.image_id = j.at("filename").get<std::string>();
  rec.image_path = image_root.empty() ? rec.image_id : image_root + "/" + rec.image_id;
  rec.split_tag = split_tag_from(j.at("split").get<std::string>());
  const auto& html = j.at("html");
  rec.structure_tokens = html.at("structure").at("tokens").get<std::vector<std::string>>();
  check(!rec.structure_tokens.empty(), "empty structure token list");
  for (const auto& cj : html.at("cells")) {
    CellAnnotation cell;
    if (cj.contains("tokens")) cell.tokens = cj.at("tokens").get<std::vector<std::string>>();
    if (cj.contains("bbox")) cell.bbox = bbox_from_json(cj.at("bbox"));
    rec.cells.push_back(std::move(cell));
  }
  size_t slots = 0;
  for (const auto& tok : rec.structure_tokens)
    if (is_cell_open_token(tok)) ++slots;
  check(slots == rec.cells.size(), "cell count does not match structure slots");
  return rec;
}

}  // namespace detail

/// Streams one record per line of a PubTabNet/FinTabNet-layout JSONL file.
/// Strict mode throws RecordError on the first malformed line; lenient
/// mode skips it and remembers a warning.
class AnnotationReader {
 public:
  explicit AnnotationReader(const std::string& path, bool lenient = false,
                            std::string image_root = "")
      : in_(path), lenient_(lenient), image_root_(std::move(image_root)) {
    if (!in_) fail("cannot open annotations: " + path);
    if (image_root_.empty()) {
      const auto parent = std::filesystem::path(path).parent_path();
      image_root_ = (parent / "images").string();
    }
  }

  std::optional<AnnotationRecord> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.empty()) continue;
      try {
        return detail::record_from_json(nlohmann::json::parse(line), image_root_);
      } catch (const std::exception& e) {
        if (!lenient_) throw RecordError(line_no_, e.what());
        warnings_.push_back("line " + std::to_string(line_no_) + ": " + e.what());
      }
    }
    return std::nullopt;
  }

  std::vector<AnnotationRecord> read_all() {
    std::vector<AnnotationRecord> out;
    while (auto rec = next()) out.push_back(std::move(*rec));
    return out;
  }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::ifstream in_;
  bool lenient_;
  std::string image_root_;
  int line_no_ = 0;
  std::vector<std::string> warnings_;
};

enum class Complexity { simple, complex_ };

/// A table is complex iff any cell spans more than one row or column;
/// only the structure tokens matter.
inline Complexity classify_complexity(const AnnotationRecord& rec) {
  for (const auto& tok : rec.structure_tokens) {
    for (const char* key : {"rowspan", "colspan"}) {
      const size_t pos = tok.find(key);
      if (pos == std::string::npos) continue;
      size_t i = pos + 7;
      while (i < tok.size() && !std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
      int span = 0;
      while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i])))
        span = span * 10 + (tok[i++] - '0');
      if (span > 1) return Complexity::complex_;
    }
  }
  return Complexity::simple;
}

struct DatasetSplitStats {
  int64_t n_simple = 0;
  int64_t n_complex = 0;
  int64_t n_total = 0;
};

template <typename RecordRange>
DatasetSplitStats audit_counts(const RecordRange& records) {
  DatasetSplitStats s;
  for (const auto& rec : records) {
    if (classify_complexity(rec) == Complexity::simple)
      ++s.n_simple;
    else
      ++s.n_complex;
    ++s.n_total;
  }
  return s;
}

inline DatasetSplitStats audit_counts(AnnotationReader& reader) {
  DatasetSplitStats s;
  while (auto rec = reader.next()) {
    if (classify_complexity(*rec) == Complexity::simple)
      ++s.n_simple;
    else
      ++s.n_complex;
    ++s.n_total;
  }
  return s;
}

/// Count-weighted average of bucket scores.
inline double weighted_score(const std::vector<std::pair<double, int64_t>>& groups) {
  check(!groups.empty(), "weighted_score of empty group list");
  double num = 0;
  int64_t den = 0;
  for (const auto& [score, count] : groups) {
    check(count > 0, "weighted_score requires positive counts");
    num += score * static_cast<double>(count);
    den += count;
  }
  return num / static_cast<double>(den);
}

inline TextBlock make_text_block(const BBox& bbox, std::string text) {
  check(bbox.valid(), "text block bbox with non-positive extent");
  return TextBlock{bbox, std::move(text)};
}

/// Loads {image_id, blocks:[{bbox, text}]} lines into a per-image map.
inline std::map<std::string, std::vector<TextBlock>> load_text_blocks(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open text blocks: " + path);
  std::map<std::string, std::vector<TextBlock>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      std::vector<TextBlock> blocks;
      for (const auto& bj : j.at("blocks"))
        blocks.push_back(
            make_text_block(detail::bbox_from_json(bj.at("bbox")), bj.at("text").get<std::string>()));
      out[j.at("image_id").get<std::string>()] = std::move(blocks);
    } catch (const std::exception& e) {
      throw RecordError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace tsr
