#pragma once

#include <array>
#include <string>
#include <vector>

#include "tsr/html.hpp"
#include "tsr/tensor.hpp"

namespace tsr {

/// Grid-cell merge tokens: C starts a cell, L merges left, U merges up,
/// X merges both. The new-line token of the source language is not needed
/// on an explicit 2-D grid.
enum class Otsl : uint8_t { C = 0, L = 1, U = 2, X = 3 };

inline char otsl_char(Otsl t) { return "CLUX"[static_cast<int>(t)]; }

inline Otsl otsl_from_char(char c) {
  switch (c) {
    case 'C': return Otsl::C;
    case 'L': return Otsl::L;
    case 'U': return Otsl::U;
    case 'X': return Otsl::X;
  }
  fail(std::string("bad otsl token: ") + c);
}

struct OtslGrid {
  int rows = 0;
  int cols = 0;
  std::vector<Otsl> cells;  // row-major

  OtslGrid() = default;
  OtslGrid(int r, int c) : rows(r), cols(c), cells(static_cast<size_t>(r) * c, Otsl::C) {}

  Otsl& at(int r, int c) { return cells[static_cast<size_t>(r) * cols + c]; }
  Otsl at(int r, int c) const { return cells[static_cast<size_t>(r) * cols + c]; }

  bool operator==(const OtslGrid&) const = default;

  std::string str() const {
    std::string s;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) s += otsl_char(at(r, c));
      if (r + 1 < rows) s += '/';
    }
    return s;
  }

  static OtslGrid from_str(const std::string& s) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : s) {
      if (c == '/') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    lines.push_back(cur);
    OtslGrid g(static_cast<int>(lines.size()), static_cast<int>(lines[0].size()));
    for (int r = 0; r < g.rows; ++r) {
      check(static_cast<int>(lines[r].size()) == g.cols, "ragged otsl string");
      for (int c = 0; c < g.cols; ++c) g.at(r, c) = otsl_from_char(lines[r][c]);
    }
    return g;
  }
};

struct OtslViolation {
  int row = 0;
  int col = 0;
  std::string what;
};

struct SpanCell {
  int top = 0;
  int left = 0;
  int rowspan = 1;
  int colspan = 1;

  bool operator==(const SpanCell&) const = default;
};

/// Resolved merge structure: cells in document order (top, then left) and
/// a cover map from every grid cell to its owning cell index.
struct SpanMap {
  int rows = 0;
  int cols = 0;
  std::vector<SpanCell> cells;
  std::vector<int> cover;  // row-major, index into cells

  int owner(int r, int c) const { return cover[static_cast<size_t>(r) * cols + c]; }
};

/// Checks the token grammar: L continues a top row (left is L or C), U
/// continues a left column (upper is U or C), X fills the interior (left
/// is X or U, upper is X or L), nothing merges out of the first row or
/// column, and every resolved region is a filled rectangle. Violations
/// are returned as data; an empty list means the grid is valid.
inline std::vector<OtslViolation> validate_otsl(const OtslGrid& g) {
  std::vector<OtslViolation> out;
  auto bad = [&](int r, int c, std::string what) { out.push_back({r, c, std::move(what)}); };

  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const Otsl t = g.at(r, c);
      const Otsl left = c > 0 ? g.at(r, c - 1) : Otsl::C;
      const Otsl up = r > 0 ? g.at(r - 1, c) : Otsl::C;
      switch (t) {
        case Otsl::C:
          break;
        case Otsl::L:
          if (c == 0)
            bad(r, c, "L in first column");
          else if (left != Otsl::L && left != Otsl::C)
            bad(r, c, "L after non-{L,C}");
          break;
        case Otsl::U:
          if (r == 0)
            bad(r, c, "U in first row");
          else if (up != Otsl::U && up != Otsl::C)
            bad(r, c, "U below non-{U,C}");
          break;
        case Otsl::X:
          if (r == 0 || c == 0)
            bad(r, c, "X on grid border");
          else {
            if (left != Otsl::X && left != Otsl::U) bad(r, c, "X after non-{X,U}");
            if (up != Otsl::X && up != Otsl::L) bad(r, c, "X below non-{X,L}");
          }
          break;
      }
    }
  }
  if (!out.empty()) return out;

  // Local rules hold; resolve ownership and insist on rectangles.
  const int n = g.rows * g.cols;
  std::vector<int> owner(static_cast<size_t>(n), -1);
  auto id = [&](int r, int c) { return r * g.cols + c; };
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      switch (g.at(r, c)) {
        case Otsl::C: owner[id(r, c)] = id(r, c); break;
        case Otsl::L: owner[id(r, c)] = owner[id(r, c - 1)]; break;
        case Otsl::U: owner[id(r, c)] = owner[id(r - 1, c)]; break;
        case Otsl::X: {
          const int via_left = owner[id(r, c - 1)];
          const int via_up = owner[id(r - 1, c)];
          if (via_left != via_up) bad(r, c, "X joins two different cells");
          owner[id(r, c)] = via_left;
          break;
        }
      }
    }
  }
  if (!out.empty()) return out;

  // Bounding rectangle of each region must be exactly the region.
  std::vector<std::array<int, 5>> bounds(static_cast<size_t>(n), {g.rows, g.cols, -1, -1, 0});
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) {
      auto& b = bounds[static_cast<size_t>(owner[id(r, c)])];
      b[0] = std::min(b[0], r);
      b[1] = std::min(b[1], c);
      b[2] = std::max(b[2], r);
      b[3] = std::max(b[3], c);
      b[4] += 1;
    }
  for (int i = 0; i < n; ++i) {
    const auto& b = bounds[static_cast<size_t>(i)];
    if (b[4] == 0) continue;
    const int area = (b[2] - b[0] + 1) * (b[3] - b[1] + 1);
    if (area != b[4]) bad(i / g.cols, i % g.cols, "merged region is not rectangular");
  }
  return out;
}

/// Repairs a predicted grid with a row-major scan. Each kept span must be
/// completable from what is already fixed: a U extending a span downward
/// is kept only if the whole interior of that row is X in the input, so
/// demotions to C can never strand a partial rectangle.
inline OtslGrid repair_otsl(const OtslGrid& g) {
  OtslGrid out = g;
  const int n = g.rows * g.cols;
  std::vector<int> owner(static_cast<size_t>(std::max(n, 1)), -1);
  std::vector<int> span_left(static_cast<size_t>(std::max(n, 1)), 0);
  std::vector<int> span_right(static_cast<size_t>(std::max(n, 1)), 0);
  auto id = [&](int r, int c) { return r * g.cols + c; };

  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      Otsl t = out.at(r, c);
      int own = id(r, c);
      switch (t) {
        case Otsl::C:
          break;
        case Otsl::L: {
          const Otsl left = c > 0 ? out.at(r, c - 1) : Otsl::X;
          if (c == 0 || (left != Otsl::L && left != Otsl::C)) {
            t = Otsl::C;
          } else {
            own = owner[id(r, c - 1)];
            span_right[static_cast<size_t>(own)] = c;
          }
          break;
        }
        case Otsl::U: {
          const Otsl up = r > 0 ? out.at(r - 1, c) : Otsl::X;
          bool ok = r > 0 && (up == Otsl::U || up == Otsl::C);
          if (ok) {
            own = owner[id(r - 1, c)];
            ok = span_left[static_cast<size_t>(own)] == c;
            // Keep the extension only when the rest of this grid row can
            // complete the rectangle.
            for (int cc = c + 1; ok && cc <= span_right[static_cast<size_t>(own)]; ++cc)
              ok = out.at(r, cc) == Otsl::X;
          }
          if (!ok) {
            t = Otsl::C;
            own = id(r, c);
          }
          break;
        }
        case Otsl::X: {
          const Otsl left = c > 0 ? out.at(r, c - 1) : Otsl::C;
          const Otsl up = r > 0 ? out.at(r - 1, c) : Otsl::C;
          bool ok = r > 0 && c > 0 && (left == Otsl::X || left == Otsl::U) &&
                    (up == Otsl::X || up == Otsl::L) &&
                    owner[id(r, c - 1)] == owner[id(r - 1, c)];
          if (ok) {
            own = owner[id(r, c - 1)];
          } else {
            t = Otsl::C;
            own = id(r, c);
          }
          break;
        }
      }
      out.at(r, c) = t;
      owner[static_cast<size_t>(id(r, c))] = own;
      if (t == Otsl::C) {
        span_left[static_cast<size_t>(own)] = c;
        span_right[static_cast<size_t>(own)] = c;
      }
    }
  }
  return out;
}

/// Resolves a valid grid into document-ordered span cells plus the cover
/// map. Throws if the grid is invalid; run repair_otsl first on
/// predictions.
inline SpanMap otsl_to_spans(const OtslGrid& g) {
  check(validate_otsl(g).empty(), "otsl_to_spans requires a valid grid");
  SpanMap m;
  m.rows = g.rows;
  m.cols = g.cols;
  m.cover.assign(static_cast<size_t>(g.rows) * g.cols, -1);
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (g.at(r, c) != Otsl::C) continue;
      SpanCell cell{r, c, 1, 1};
      while (c + cell.colspan < g.cols && g.at(r, c + cell.colspan) == Otsl::L) ++cell.colspan;
      while (r + cell.rowspan < g.rows && g.at(r + cell.rowspan, c) == Otsl::U) ++cell.rowspan;
      const int index = static_cast<int>(m.cells.size());
      m.cells.push_back(cell);
      for (int rr = r; rr < r + cell.rowspan; ++rr)
        for (int cc = c; cc < c + cell.colspan; ++cc)
          m.cover[static_cast<size_t>(rr) * g.cols + cc] = index;
    }
  }
  return m;
}

/// Emits one HTML row per grid row; a cell appears in the row where it
/// starts, carrying rowspan/colspan when > 1.
inline HtmlTable spans_to_html(const SpanMap& spans, const std::vector<std::string>& contents) {
  check(contents.size() == spans.cells.size(), "one content string per cell required");
  HtmlTable t;
  t.rows.resize(static_cast<size_t>(spans.rows));
  for (size_t i = 0; i < spans.cells.size(); ++i) {
    const SpanCell& s = spans.cells[i];
    t.rows[static_cast<size_t>(s.top)].push_back({s.rowspan, s.colspan, contents[i]});
  }
  return t;
}

/// Reconstructs grid occupancy from an HTML table and re-encodes it as
/// tokens. Throws when spans overlap or rows disagree on width.
inline OtslGrid html_to_otsl(const HtmlTable& t) {
  const int rows = static_cast<int>(t.rows.size());
  check(rows > 0, "empty table");

  // Standard HTML placement: walk each row left to right, skipping slots
  // claimed by rowspans from above.
  int cols = 0;
  {
    int width = 0;
    for (const auto& cell : t.rows[0]) width += std::max(1, cell.colspan);
    cols = width;
  }
  check(cols > 0, "table with empty first row");

  std::vector<int> owner(static_cast<size_t>(rows) * cols, -1);
  std::vector<SpanCell> cells;
  for (int r = 0; r < rows; ++r) {
    int c = 0;
    for (const auto& cell : t.rows[static_cast<size_t>(r)]) {
      while (c < cols && owner[static_cast<size_t>(r) * cols + c] != -1) ++c;
      const int rs = std::max(1, cell.rowspan);
      const int cs = std::max(1, cell.colspan);
      check(c + cs <= cols, "row wider than table");
      check(r + rs <= rows, "rowspan past last row");
      const int index = static_cast<int>(cells.size());
      cells.push_back({r, c, rs, cs});
      for (int rr = r; rr < r + rs; ++rr)
        for (int cc = c; cc < c + cs; ++cc) {
          int& slot = owner[static_cast<size_t>(rr) * cols + cc];
          check(slot == -1, "overlapping spans");
          slot = index;
        }
      c += cs;
    }
  }
  for (int i = 0; i < rows * cols; ++i) check(owner[static_cast<size_t>(i)] != -1, "grid has gaps");

  OtslGrid g(rows, cols);
  for (const auto& s : cells) {
    for (int rr = s.top; rr < s.top + s.rowspan; ++rr)
      for (int cc = s.left; cc < s.left + s.colspan; ++cc) {
        if (rr == s.top && cc == s.left)
          g.at(rr, cc) = Otsl::C;
        else if (rr == s.top)
          g.at(rr, cc) = Otsl::L;
        else if (cc == s.left)
          g.at(rr, cc) = Otsl::U;
        else
          g.at(rr, cc) = Otsl::X;
      }
  }
  return g;
}

}  // namespace tsr
