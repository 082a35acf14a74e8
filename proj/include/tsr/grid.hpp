#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tsr/data_io.hpp"
#include "tsr/tensor.hpp"

namespace tsr {

using BinaryLabels = std::vector<uint8_t>;  // 1 = split line

struct SeparatorMask {
  BinaryLabels row_labels;  // length H
  BinaryLabels col_labels;  // length W

  bool operator==(const SeparatorMask&) const = default;
};

struct EmptyTableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// R x C partition of the image. Boundaries include the outer edges, so
/// row_bounds has R+1 entries; the internal entries are the separator
/// lines.
struct GridGeometry {
  std::vector<double> row_bounds;
  std::vector<double> col_bounds;

  int rows() const { return static_cast<int>(row_bounds.size()) - 1; }
  int cols() const { return static_cast<int>(col_bounds.size()) - 1; }

  std::vector<double> row_seps() const {
    return {row_bounds.begin() + 1, row_bounds.end() - 1};
  }
  std::vector<double> col_seps() const {
    return {col_bounds.begin() + 1, col_bounds.end() - 1};
  }

  BBox cell_box(int r, int c) const {
    return BBox{col_bounds[static_cast<size_t>(c)], row_bounds[static_cast<size_t>(r)],
                col_bounds[static_cast<size_t>(c) + 1], row_bounds[static_cast<size_t>(r) + 1]};
  }

  /// Box of the merged region [r0,r1) x [c0,c1).
  BBox region_box(int r0, int c0, int r1, int c1) const {
    return BBox{col_bounds[static_cast<size_t>(c0)], row_bounds[static_cast<size_t>(r0)],
                col_bounds[static_cast<size_t>(c1)], row_bounds[static_cast<size_t>(r1)]};
  }
};

namespace detail {

struct Run {
  int start = 0;
  int end = 0;  // half-open
};

inline std::vector<Run> content_runs(const BinaryLabels& labels) {
  std::vector<Run> runs;
  int i = 0;
  const int n = static_cast<int>(labels.size());
  while (i < n) {
    if (labels[static_cast<size_t>(i)]) {
      ++i;
      continue;
    }
    Run r{i, i};
    while (r.end < n && !labels[static_cast<size_t>(r.end)]) ++r.end;
    runs.push_back(r);
    i = r.end;
  }
  return runs;
}

inline double run_midpoint(int start, int end) {
  // Midpoint over the inclusive line range [start, end-1].
  return 0.5 * (start + end - 1);
}

inline double round_half_down(double x) { return std::ceil(x - 0.5); }

inline std::vector<double> axis_bounds(const BinaryLabels& labels) {
  const auto bands = content_runs(labels);
  if (bands.empty()) throw EmptyTableError("no content band on axis");
  std::vector<double> bounds;
  bounds.reserve(bands.size() + 1);
  bounds.push_back(bands.front().start == 0 ? 0.0 : run_midpoint(0, bands.front().start));
  for (size_t k = 0; k + 1 < bands.size(); ++k)
    bounds.push_back(round_half_down(run_midpoint(bands[k].end, bands[k + 1].start)));
  const int n = static_cast<int>(labels.size());
  bounds.push_back(bands.back().end == n ? static_cast<double>(n)
                                         : run_midpoint(bands.back().end, n));
  return bounds;
}

}  // namespace detail

/// Places separators at split-run midpoints: content bands are maximal
/// non-split runs, each internal separator sits at the midpoint of the
/// split run between two bands (rounded half-down), and the outer
/// boundaries sit at the midpoints of the leading/trailing split runs
/// (the image edge when a band touches it).
inline GridGeometry extract_grid(const BinaryLabels& row_labels, const BinaryLabels& col_labels) {
  GridGeometry g;
  g.row_bounds = detail::axis_bounds(row_labels);
  g.col_bounds = detail::axis_bounds(col_labels);
  return g;
}

/// Duplicates each label in place (stride-2 predictions back to pixels).
template <typename T>
std::vector<T> upsample_2x(const std::vector<T>& labels) {
  std::vector<T> out;
  out.reserve(labels.size() * 2);
  for (const T& v : labels) {
    out.push_back(v);
    out.push_back(v);
  }
  return out;
}

/// Flips every maximal non-split run that contains no projected text
/// center to split. Never flips toward non-split.
inline BinaryLabels reclassify_by_text(const BinaryLabels& labels,
                                       const std::vector<double>& centers) {
  BinaryLabels out = labels;
  const int n = static_cast<int>(labels.size());
  std::vector<uint8_t> has_center(static_cast<size_t>(n), 0);
  for (double c : centers) {
    const int line = static_cast<int>(std::floor(c));
    if (line >= 0 && line < n) has_center[static_cast<size_t>(line)] = 1;
  }
  for (const auto& run : detail::content_runs(labels)) {
    bool any = false;
    for (int i = run.start; i < run.end && !any; ++i) any = has_center[static_cast<size_t>(i)];
    if (!any)
      for (int i = run.start; i < run.end; ++i) out[static_cast<size_t>(i)] = 1;
  }
  return out;
}

}  // namespace tsr
