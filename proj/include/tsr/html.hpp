#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsr/tensor.hpp"

namespace tsr {

struct HtmlCell {
  int rowspan = 1;
  int colspan = 1;
  std::string content;

  bool operator==(const HtmlCell&) const = default;
};

/// Ordered tree of table rows and cells. Cells appear in document order:
/// a cell belongs to the row where it starts; spans hang down/right.
struct HtmlTable {
  std::vector<std::vector<HtmlCell>> rows;

  bool operator==(const HtmlTable&) const = default;
  bool empty() const { return rows.empty(); }
};

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool in_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += c;
  }
  return out;
}

inline std::string escape_html(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string unescape_html(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      const std::string_view rest = s.substr(i);
      if (rest.rfind("&amp;", 0) == 0) { out += '&'; i += 5; continue; }
      if (rest.rfind("&lt;", 0) == 0) { out += '<'; i += 4; continue; }
      if (rest.rfind("&gt;", 0) == 0) { out += '>'; i += 4; continue; }
      if (rest.rfind("&quot;", 0) == 0) { out += '"'; i += 6; continue; }
      if (rest.rfind("&#39;", 0) == 0) { out += '\''; i += 5; continue; }
      if (rest.rfind("&nbsp;", 0) == 0) { out += ' '; i += 6; continue; }
    }
    out += s[i++];
  }
  return out;
}

/// Serializes with rowspan/colspan attributes only when > 1 and no
/// thead/tbody wrappers.
inline std::string serialize_table(const HtmlTable& t) {
  std::string out = "<table>";
  for (const auto& row : t.rows) {
    out += "<tr>";
    for (const auto& cell : row) {
      out += "<td";
      if (cell.rowspan > 1) out += " rowspan=\"" + std::to_string(cell.rowspan) + "\"";
      if (cell.colspan > 1) out += " colspan=\"" + std::to_string(cell.colspan) + "\"";
      out += ">";
      out += escape_html(cell.content);
      out += "</td>";
    }
    out += "</tr>";
  }
  out += "</table>";
  return out;
}

namespace detail {

struct HtmlTag {
  std::string name;
  bool closing = false;
  int rowspan = 1;
  int colspan = 1;
};

inline std::optional<int> parse_span_attr(std::string_view tag, std::string_view key) {
  const size_t pos = tag.find(key);
  if (pos == std::string_view::npos) return std::nullopt;
  size_t i = pos + key.size();
  while (i < tag.size() && (tag[i] == '=' || tag[i] == '"' || tag[i] == '\'' || tag[i] == ' '))
    ++i;
  int value = 0;
  bool any = false;
  while (i < tag.size() && std::isdigit(static_cast<unsigned char>(tag[i]))) {
    value = value * 10 + (tag[i] - '0');
    any = true;
    ++i;
  }
  if (!any) return std::nullopt;
  return value;
}

inline HtmlTag parse_tag(std::string_view body) {
  HtmlTag tag;
  size_t i = 0;
  if (i < body.size() && body[i] == '/') {
    tag.closing = true;
    ++i;
  }
  while (i < body.size() && std::isalnum(static_cast<unsigned char>(body[i]))) {
    tag.name += static_cast<char>(std::tolower(static_cast<unsigned char>(body[i])));
    ++i;
  }
  if (auto rs = parse_span_attr(body, "rowspan")) tag.rowspan = std::max(1, *rs);
  if (auto cs = parse_span_attr(body, "colspan")) tag.colspan = std::max(1, *cs);
  return tag;
}

}  // namespace detail

/// Parses the table subset of HTML used by the annotation corpora:
/// table/thead/tbody/tr/td(th) plus inline markup inside cells, which is
/// stripped. th is normalized to td. Throws on structural errors.
inline HtmlTable parse_table(std::string_view html) {
  HtmlTable table;
  bool in_table = false;
  bool in_row = false;
  bool in_cell = false;
  std::string text;
  HtmlCell cell;

  size_t i = 0;
  while (i < html.size()) {
    if (html[i] == '<') {
      const size_t end = html.find('>', i);
      check(end != std::string_view::npos, "unterminated tag in html");
      const detail::HtmlTag tag = detail::parse_tag(html.substr(i + 1, end - i - 1));
      i = end + 1;
      if (tag.name == "table") {
        if (!tag.closing) {
          check(!in_table, "nested table unsupported");
          in_table = true;
        } else {
          in_table = false;
        }
      } else if (tag.name == "tr") {
        if (!tag.closing) {
          check(in_table && !in_row, "misplaced <tr>");
          in_row = true;
          table.rows.emplace_back();
        } else {
          check(in_row, "misplaced </tr>");
          in_row = false;
        }
      } else if (tag.name == "td" || tag.name == "th") {
        if (!tag.closing) {
          check(in_row && !in_cell, "misplaced <td>");
          in_cell = true;
          cell = HtmlCell{tag.rowspan, tag.colspan, ""};
          text.clear();
        } else {
          check(in_cell, "misplaced </td>");
          cell.content = unescape_html(text);
          table.rows.back().push_back(cell);
          in_cell = false;
        }
      }
      // thead/tbody and inline markup carry no structure here.
    } else {
      if (in_cell) text += html[i];
      ++i;
    }
  }
  check(!in_row && !in_cell, "unterminated row or cell");
  return table;
}

/// Canonical form used for comparisons: whitespace-collapsed contents,
/// spans clamped to >= 1. Header wrappers are already gone after parsing.
inline HtmlTable canonicalize(const HtmlTable& t) {
  HtmlTable out = t;
  for (auto& row : out.rows)
    for (auto& cell : row) {
      cell.content = collapse_whitespace(cell.content);
      cell.rowspan = std::max(1, cell.rowspan);
      cell.colspan = std::max(1, cell.colspan);
    }
  return out;
}

/// Assembles a table from a PubTabNet-style structure token list plus one
/// content string per cell slot in document order.
inline HtmlTable table_from_tokens(const std::vector<std::string>& structure_tokens,
                                   const std::vector<std::string>& cell_contents) {
  std::string html;
  for (const auto& tok : structure_tokens) html += tok;
  // Cell contents are spliced by replaying the parse: parse structure only,
  // then fill in document order.
  HtmlTable table = parse_table(html);
  size_t next = 0;
  for (auto& row : table.rows)
    for (auto& cell : row) {
      check(next < cell_contents.size(), "fewer contents than cell slots");
      cell.content = cell_contents[next++];
    }
  check(next == cell_contents.size(), "more contents than cell slots");
  return table;
}

}  // namespace tsr
