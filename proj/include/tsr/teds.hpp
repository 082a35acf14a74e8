#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tsr/html.hpp"
#include "tsr/tensor.hpp"

namespace tsr {

/// Node of an ordered labeled tree, stored as an index forest.
struct TreeNode {
  std::string tag;
  int rowspan = 1;
  int colspan = 1;
  std::string content;
  std::vector<int> children;
};

struct Tree {
  std::vector<TreeNode> nodes;
  int root = 0;

  int size() const { return static_cast<int>(nodes.size()); }
};

inline int add_node(Tree& t, std::string tag, int parent) {
  t.nodes.push_back(TreeNode{std::move(tag), 1, 1, "", {}});
  const int id = static_cast<int>(t.nodes.size()) - 1;
  if (parent >= 0) t.nodes[static_cast<size_t>(parent)].children.push_back(id);
  return id;
}

/// table -> tr -> td tree with collapsed cell text; the comparison form
/// behind both similarity variants.
inline Tree tree_from_table(const HtmlTable& table) {
  Tree t;
  const int root = add_node(t, "table", -1);
  for (const auto& row : table.rows) {
    const int tr = add_node(t, "tr", root);
    for (const auto& cell : row) {
      const int td = add_node(t, "td", tr);
      t.nodes[static_cast<size_t>(td)].rowspan = std::max(1, cell.rowspan);
      t.nodes[static_cast<size_t>(td)].colspan = std::max(1, cell.colspan);
      t.nodes[static_cast<size_t>(td)].content = collapse_whitespace(cell.content);
    }
  }
  return t;
}

inline double normalized_levenshtein(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 0.0;
  const size_t n = a.size(), m = b.size();
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

/// Rename/insert/delete costs used by the similarity metric: unit
/// insert/delete; renaming nodes with different tags or span attributes
/// costs 1; matching td nodes cost the normalized edit distance of their
/// contents (zero in structure-only mode).
struct TedsCosts {
  bool structure_only = false;

  double del(const TreeNode&) const { return 1.0; }
  double ins(const TreeNode&) const { return 1.0; }
  double ren(const TreeNode& a, const TreeNode& b) const {
    if (a.tag != b.tag) return 1.0;
    if (a.tag == "td") {
      if (a.rowspan != b.rowspan || a.colspan != b.colspan) return 1.0;
      if (structure_only) return 0.0;
      return normalized_levenshtein(a.content, b.content);
    }
    return 0.0;
  }
};

namespace detail {

/// Zhang–Shasha ordered tree edit distance over index trees. Trees here
/// are shallow and small, so the classic O(n^2 * depth^2) bound is fine.
template <typename Costs>
class ZhangShasha {
 public:
  ZhangShasha(const Tree& a, const Tree& b, const Costs& costs)
      : a_(a), b_(b), costs_(costs) {
    build(a_, post_a_, lml_a_, kr_a_);
    build(b_, post_b_, lml_b_, kr_b_);
  }

  double run() {
    const size_t na = post_a_.size(), nb = post_b_.size();
    if (na == 0 || nb == 0) {
      double d = 0;
      for (int i : post_a_) d += costs_.del(a_.nodes[static_cast<size_t>(i)]);
      for (int j : post_b_) d += costs_.ins(b_.nodes[static_cast<size_t>(j)]);
      return d;
    }
    dist_.assign(na, std::vector<double>(nb, 0.0));
    for (int i : kr_a_)
      for (int j : kr_b_) tree_dist(i, j);
    return dist_[na - 1][nb - 1];
  }

 private:
  static void build(const Tree& t, std::vector<int>& post, std::vector<int>& lml,
                    std::vector<int>& keyroots) {
    post.clear();
    std::vector<int> first_leaf(t.nodes.size(), -1);
    // Iterative postorder.
    std::vector<std::pair<int, size_t>> stack{{t.root, 0}};
    std::vector<int> order_of(t.nodes.size(), -1);
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& kids = t.nodes[static_cast<size_t>(node)].children;
      if (next < kids.size()) {
        ++next;
        stack.push_back({kids[next - 1], 0});
        continue;
      }
      order_of[static_cast<size_t>(node)] = static_cast<int>(post.size());
      post.push_back(node);
      stack.pop_back();
    }
    lml.assign(post.size(), 0);
    for (size_t k = 0; k < post.size(); ++k) {
      int n = post[k];
      while (!t.nodes[static_cast<size_t>(n)].children.empty())
        n = t.nodes[static_cast<size_t>(n)].children.front();
      lml[k] = order_of[static_cast<size_t>(n)];
    }
    keyroots.clear();
    for (size_t k = 0; k < post.size(); ++k) {
      bool is_keyroot = true;
      for (size_t k2 = k + 1; k2 < post.size(); ++k2)
        if (lml[k2] == lml[k]) {
          is_keyroot = false;
          break;
        }
      if (is_keyroot) keyroots.push_back(static_cast<int>(k));
    }
  }

  const TreeNode& na(int k) const { return a_.nodes[static_cast<size_t>(post_a_[static_cast<size_t>(k)])]; }
  const TreeNode& nb(int k) const { return b_.nodes[static_cast<size_t>(post_b_[static_cast<size_t>(k)])]; }

  void tree_dist(int i, int j) {
    const int li = lml_a_[static_cast<size_t>(i)];
    const int lj = lml_b_[static_cast<size_t>(j)];
    const int m = i - li + 2;
    const int n = j - lj + 2;
    std::vector<std::vector<double>> fd(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int x = 1; x < m; ++x)
      fd[static_cast<size_t>(x)][0] = fd[static_cast<size_t>(x - 1)][0] + costs_.del(na(li + x - 1));
    for (int y = 1; y < n; ++y)
      fd[0][static_cast<size_t>(y)] = fd[0][static_cast<size_t>(y - 1)] + costs_.ins(nb(lj + y - 1));
    for (int x = 1; x < m; ++x) {
      for (int y = 1; y < n; ++y) {
        const int ai = li + x - 1;
        const int bj = lj + y - 1;
        if (lml_a_[static_cast<size_t>(ai)] == li && lml_b_[static_cast<size_t>(bj)] == lj) {
          fd[static_cast<size_t>(x)][static_cast<size_t>(y)] = std::min(
              {fd[static_cast<size_t>(x - 1)][static_cast<size_t>(y)] + costs_.del(na(ai)),
               fd[static_cast<size_t>(x)][static_cast<size_t>(y - 1)] + costs_.ins(nb(bj)),
               fd[static_cast<size_t>(x - 1)][static_cast<size_t>(y - 1)] + costs_.ren(na(ai), nb(bj))});
          dist_[static_cast<size_t>(ai)][static_cast<size_t>(bj)] =
              fd[static_cast<size_t>(x)][static_cast<size_t>(y)];
        } else {
          const int px = lml_a_[static_cast<size_t>(ai)] - li;
          const int py = lml_b_[static_cast<size_t>(bj)] - lj;
          fd[static_cast<size_t>(x)][static_cast<size_t>(y)] = std::min(
              {fd[static_cast<size_t>(x - 1)][static_cast<size_t>(y)] + costs_.del(na(ai)),
               fd[static_cast<size_t>(x)][static_cast<size_t>(y - 1)] + costs_.ins(nb(bj)),
               fd[static_cast<size_t>(px)][static_cast<size_t>(py)] +
                   dist_[static_cast<size_t>(ai)][static_cast<size_t>(bj)]});
        }
      }
    }
  }

  const Tree& a_;
  const Tree& b_;
  const Costs& costs_;
  std::vector<int> post_a_, post_b_, lml_a_, lml_b_, kr_a_, kr_b_;
  std::vector<std::vector<double>> dist_;
};

}  // namespace detail

template <typename Costs>
double tree_edit_distance(const Tree& a, const Tree& b, const Costs& costs) {
  return detail::ZhangShasha<Costs>(a, b, costs).run();
}

/// Similarity in [0,1]: 1 - dist / max(|pred|, |gt|).
inline double teds_trees(const Tree& pred, const Tree& gt, bool structure_only) {
  const double dist = tree_edit_distance(pred, gt, TedsCosts{structure_only});
  const double denom = static_cast<double>(std::max(pred.size(), gt.size()));
  if (denom == 0) return 1.0;
  return 1.0 - dist / denom;
}

inline double teds_tables(const HtmlTable& pred, const HtmlTable& gt, bool structure_only) {
  return teds_trees(tree_from_table(pred), tree_from_table(gt), structure_only);
}

/// Scores HTML strings. A prediction that does not parse scores 0 and is
/// reported through `pred_parse_failed` when provided.
inline double teds(const std::string& pred_html, const std::string& gt_html,
                   bool structure_only, bool* pred_parse_failed = nullptr) {
  if (pred_parse_failed) *pred_parse_failed = false;
  HtmlTable pred, gt;
  try {
    pred = parse_table(pred_html);
    gt = parse_table(gt_html);
  } catch (const std::exception&) {
    if (pred_parse_failed) *pred_parse_failed = true;
    return 0.0;
  }
  return teds_tables(pred, gt, structure_only);
}

}  // namespace tsr
