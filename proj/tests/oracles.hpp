#pragma once

// Brute-force reference implementations, deliberately written against the
// raw GraphSpec index lists rather than OntologyDag so they share nothing
// with the code under test beyond the problem statement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "testutil.hpp"

namespace gonsel::test::oracle {

/// Transitive closure by boolean matrix powering: reach[i][j] = 1 iff a
/// child->parent path i -> j exists.
inline std::vector<std::vector<bool>> closure_by_powering(const GraphSpec& g) {
  const std::size_t n = g.accessions.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [c, p] : g.edges) adj[c][p] = true;
  std::vector<std::vector<bool>> reach = adj;
  for (;;) {
    // next = reach OR reach * adj
    std::vector<std::vector<bool>> next = reach;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (next[i][j]) continue;
        for (std::size_t t = 0; t < n; ++t)
          if (reach[i][t] && adj[t][j]) {
            next[i][j] = true;
            changed = true;
            break;
          }
      }
    reach.swap(next);
    if (!changed) return reach;
  }
}

inline std::set<int> ancestors(const GraphSpec& g,
                               const std::vector<std::vector<bool>>& reach,
                               int k) {
  std::set<int> out;
  for (std::size_t j = 0; j < g.accessions.size(); ++j)
    if (reach[k][j]) out.insert(int(j));
  return out;
}

inline std::set<int> descendants(const GraphSpec& g,
                                 const std::vector<std::vector<bool>>& reach,
                                 int k) {
  std::set<int> out;
  for (std::size_t j = 0; j < g.accessions.size(); ++j)
    if (reach[j][k]) out.insert(int(j));
  return out;
}

inline std::set<int> siblings(const GraphSpec& g, int k) {
  std::set<int> parents_k;
  for (const auto& [c, p] : g.edges)
    if (c == k) parents_k.insert(p);
  std::set<int> out;
  for (const auto& [c, p] : g.edges)
    if (c != k && parents_k.count(p)) out.insert(c);
  return out;
}

/// Longest path length from k to any parentless node, by full enumeration.
inline int level_by_paths(const GraphSpec& g, int k) {
  std::vector<std::vector<int>> parents(g.accessions.size());
  for (const auto& [c, p] : g.edges) parents[c].push_back(p);
  // DFS over all paths; graphs are small.
  int best = 0;
  std::vector<std::pair<int, int>> stack{{k, 0}};
  while (!stack.empty()) {
    const auto [node, depth] = stack.back();
    stack.pop_back();
    if (parents[node].empty()) best = std::max(best, depth);
    for (const int p : parents[node]) stack.emplace_back(p, depth + 1);
  }
  return best;
}

/// Longest s -> q path by enumerating every path; -1 when unreachable.
inline int longest_path(const GraphSpec& g, int q, int s) {
  if (q == s) return 0;
  std::vector<std::vector<int>> parents(g.accessions.size());
  for (const auto& [c, p] : g.edges) parents[c].push_back(p);
  int best = -1;
  std::vector<std::pair<int, int>> stack{{s, 0}};
  while (!stack.empty()) {
    const auto [node, depth] = stack.back();
    stack.pop_back();
    if (node == q) {
      best = std::max(best, depth);
      continue;
    }
    for (const int p : parents[node]) stack.emplace_back(p, depth + 1);
  }
  return best;
}

/// Deepest common ancestor; {-1} means the dummy root. Ties break on the
/// smallest accession string.
inline int deepest_fork(const GraphSpec& g,
                        const std::vector<std::vector<bool>>& reach, int k,
                        int s) {
  std::set<int> common;
  for (const int a : ancestors(g, reach, k))
    if (reach[s][a]) common.insert(a);
  int best = -1;
  for (const int q : common) {
    if (best == -1) { best = q; continue; }
    const int lq = level_by_paths(g, q), lb = level_by_paths(g, best);
    if (lq > lb || (lq == lb && g.accessions[q] < g.accessions[best])) best = q;
  }
  return best;
}

/// Plain annotation table keyed by (protein, node index).
struct Annotations {
  std::vector<std::string> proteins;  // universe
  std::set<std::pair<std::string, int>> direct;
};

inline Annotations collect(const GraphSpec& g,
                           const std::vector<std::string>& universe,
                           const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, int> node_of;
  for (std::size_t i = 0; i < g.accessions.size(); ++i)
    node_of[g.accessions[i]] = int(i);
  Annotations a;
  a.proteins = universe;
  for (const auto& [p, acc] : pairs) a.direct.emplace(p, node_of.at(acc));
  return a;
}

/// TPR closure per protein: union of ancestors-or-self of its direct terms.
inline std::set<std::pair<std::string, int>> tpr_close(
    const GraphSpec& g, const std::vector<std::vector<bool>>& reach,
    const Annotations& a) {
  std::set<std::pair<std::string, int>> closed;
  for (const auto& [p, k] : a.direct) {
    closed.emplace(p, k);
    for (const int anc : ancestors(g, reach, k)) closed.emplace(p, anc);
  }
  return closed;
}

inline std::set<std::string> positives(
    const std::set<std::pair<std::string, int>>& closed, int k) {
  std::set<std::string> out;
  for (const auto& [p, t] : closed)
    if (t == k) out.insert(p);
  return out;
}

inline double jaccard(const std::set<std::pair<std::string, int>>& closed,
                      int k, int r) {
  const auto vk = positives(closed, k);
  const auto vr = positives(closed, r);
  std::set<std::string> inter, uni;
  std::set_intersection(vk.begin(), vk.end(), vr.begin(), vr.end(),
                        std::inserter(inter, inter.begin()));
  std::set_union(vk.begin(), vk.end(), vr.begin(), vr.end(),
                 std::inserter(uni, uni.begin()));
  if (uni.empty()) return 0.0;
  return double(inter.size()) / double(uni.size());
}

inline double lin(const GraphSpec& g,
                  const std::vector<std::vector<bool>>& reach,
                  const std::set<std::pair<std::string, int>>& closed,
                  std::size_t universe_size, int k, int r) {
  const double nu_k = double(positives(closed, k).size()) / double(universe_size);
  const double nu_r = double(positives(closed, r).size()) / double(universe_size);
  if (nu_k <= 0 || nu_r <= 0) return 0.0;
  if (k == r) return 1.0;
  auto anc_self = [&](int t) {
    auto s = ancestors(g, reach, t);
    s.insert(t);
    return s;
  };
  const auto ak = anc_self(k), ar = anc_self(r);
  double nu_ma = -1.0;
  for (const int q : ak) {
    if (!ar.count(q)) continue;
    const double nu = double(positives(closed, q).size()) / double(universe_size);
    if (nu > 0 && (nu_ma < 0 || nu < nu_ma)) nu_ma = nu;
  }
  if (nu_ma <= 0) return 0.0;
  const double denom = std::log(nu_k) + std::log(nu_r);
  if (denom == 0.0) return 0.0;
  const double v = 2.0 * std::log(nu_ma) / denom;
  return std::min(1.0, std::max(0.0, v));
}

/// Mid-rank by materializing sorted positions.
inline double normalized_rank(const std::vector<double>& row,
                              std::size_t target) {
  std::vector<double> sorted = row;
  std::sort(sorted.begin(), sorted.end());
  double position_sum = 0;
  std::size_t count = 0;
  for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
    if (sorted[pos] == row[target]) {
      position_sum += double(pos + 1);
      ++count;
    }
  }
  return (position_sum / double(count)) / double(row.size());
}

inline double quantile(const std::vector<double>& row, double k) {
  std::vector<double> sorted = row;
  std::sort(sorted.begin(), sorted.end());
  const auto index = std::size_t(std::ceil(k * double(sorted.size()) - 1e-9));
  return sorted[std::min(std::max<std::size_t>(index, 1), sorted.size()) - 1];
}

/// Selection pools by direct set comprehension over the definitions.
/// Candidates are proteins without a closed annotation to k.
inline std::set<std::string> candidate_set(
    const Annotations& a, const std::set<std::pair<std::string, int>>& closed,
    int k) {
  std::set<std::string> out;
  for (const std::string& p : a.proteins)
    if (!closed.count({p, k})) out.insert(p);
  return out;
}

inline std::set<std::string> nsfs_pool(
    const Annotations& a,
    const std::set<std::pair<std::string, int>>& closed, int k,
    const std::vector<int>& matrix_nodes, const std::vector<double>& row_of_k,
    double k_quantile) {
  const double threshold = quantile(row_of_k, k_quantile);
  std::set<std::string> pool;
  for (const std::string& p : candidate_set(a, closed, k)) {
    bool blocked = false;
    for (std::size_t pos = 0; pos < matrix_nodes.size(); ++pos) {
      if (row_of_k[pos] > threshold && closed.count({p, matrix_nodes[pos]}))
        blocked = true;
    }
    if (!blocked) pool.insert(p);
  }
  return pool;
}

inline std::set<std::string> sibling_pool(
    const GraphSpec& g, const Annotations& a,
    const std::set<std::pair<std::string, int>>& closed, int k) {
  const auto sibs = siblings(g, k);
  std::set<std::string> pool;
  for (const std::string& p : candidate_set(a, closed, k))
    for (const int s : sibs)
      if (closed.count({p, s})) { pool.insert(p); break; }
  return pool;
}

inline std::set<std::string> noancdesc_pool(
    const GraphSpec& g, const std::vector<std::vector<bool>>& reach,
    const Annotations& a, const std::set<std::pair<std::string, int>>& closed,
    int k) {
  auto related = ancestors(g, reach, k);
  for (const int d : descendants(g, reach, k)) related.insert(d);
  std::set<std::string> pool;
  for (const std::string& p : candidate_set(a, closed, k)) {
    bool blocked = false;
    for (const int s : related)
      if (a.direct.count({p, s})) blocked = true;  // direct, pre-TPR
    if (!blocked) pool.insert(p);
  }
  return pool;
}

inline std::map<std::string, double> snob_sigma(
    const GraphSpec& g, const Annotations& a,
    const std::set<std::pair<std::string, int>>& closed, int k) {
  // Conditional probability table p(k | s) over every term s, from scratch.
  std::vector<double> p_hat(g.accessions.size(), 0.0);
  for (std::size_t s = 0; s < g.accessions.size(); ++s) {
    std::size_t joint = 0, base = 0;
    for (const std::string& j : a.proteins) {
      if (closed.count({j, int(s)})) {
        ++base;
        if (closed.count({j, k})) ++joint;
      }
    }
    if (base > 0) p_hat[s] = double(joint) / double(base);
  }
  std::map<std::string, double> out;
  for (const std::string& p : candidate_set(a, closed, k)) {
    std::vector<int> history;
    for (std::size_t t = 0; t < g.accessions.size(); ++t)
      if (closed.count({p, int(t)})) history.push_back(int(t));
    double sigma = 0;
    if (!history.empty()) {
      for (const int s : history) sigma += p_hat[s];
      sigma /= double(history.size());
    }
    out[p] = sigma;
  }
  return out;
}

/// Exact Wilcoxon two-sided p by literal enumeration of sign assignments.
inline double wilcoxon_enumerated(const std::vector<double>& diffs) {
  const std::size_t n = diffs.size();
  std::vector<double> ranks(n);
  {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return std::fabs(diffs[x]) < std::fabs(diffs[y]);
    });
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n &&
             std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]]))
        ++j;
      for (std::size_t t = i; t <= j; ++t)
        ranks[order[t]] = (double(i + 1) + double(j + 1)) / 2.0;
      i = j + 1;
    }
  }
  double w_observed = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (diffs[i] > 0) w_observed += ranks[i];

  std::uint64_t le = 0, ge = 0;
  const std::uint64_t total = std::uint64_t(1) << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) w += ranks[i];
    if (w <= w_observed) ++le;
    if (w >= w_observed) ++ge;
  }
  const double p = 2.0 * double(std::min(le, ge)) / double(total);
  return std::min(1.0, p);
}

}  // namespace gonsel::test::oracle
