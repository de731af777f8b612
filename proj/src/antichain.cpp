// Width of a finite poset via Dilworth's theorem: the largest antichain has
// as many elements as a minimum chain cover, which is n minus a maximum
// matching in the split bipartite graph (i on the left, j on the right,
// edge iff i < j). Matching is Hopcroft-Karp over bit-set adjacency.

#include <limits>
#include <vector>

#include "fcr/lattice.hpp"

namespace fcr {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(std::span<const BitSet> adjacency)
      : adj_(adjacency),
        n_(adjacency.size()),
        match_left_(n_, kNone),
        match_right_(n_, kNone),
        dist_(n_, kNone) {}

  std::size_t run() {
    std::size_t matching = greedy();
    while (bfs()) {
      for (std::size_t u = 0; u < n_; ++u) {
        if (match_left_[u] == kNone && augment(u)) ++matching;
      }
    }
    return matching;
  }

 private:
  std::size_t greedy() {
    std::size_t matched = 0;
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = adj_[u].find_first(); v != BitSet::npos; v = adj_[u].find_next(v + 1)) {
        if (match_right_[v] == kNone) {
          match_left_[u] = v;
          match_right_[v] = u;
          ++matched;
          break;
        }
      }
    }
    return matched;
  }

  bool bfs() {
    std::vector<std::size_t> queue;
    for (std::size_t u = 0; u < n_; ++u) {
      if (match_left_[u] == kNone) {
        dist_[u] = 0;
        queue.push_back(u);
      } else {
        dist_[u] = kNone;
      }
    }
    free_dist_ = kNone;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t u = queue[head];
      if (dist_[u] >= free_dist_) continue;
      adj_[u].for_each([&](std::size_t v) {
        std::size_t w = match_right_[v];
        if (w == kNone) {
          if (free_dist_ == kNone) free_dist_ = dist_[u] + 1;
        } else if (dist_[w] == kNone) {
          dist_[w] = dist_[u] + 1;
          queue.push_back(w);
        }
      });
    }
    return free_dist_ != kNone;
  }

  // Iterative layered DFS from a free left vertex.
  bool augment(std::size_t root) {
    struct Frame {
      std::size_t u;
      std::size_t next;  // next right vertex to try
    };
    std::vector<Frame> stack{{root, 0}};
    std::vector<std::size_t> via;  // right vertex chosen at each frame
    while (!stack.empty()) {
      Frame& f = stack.back();
      std::size_t v = adj_[f.u].find_next(f.next);
      if (v == BitSet::npos) {
        dist_[f.u] = kNone;
        stack.pop_back();
        if (!via.empty()) via.pop_back();
        continue;
      }
      f.next = v + 1;
      std::size_t w = match_right_[v];
      if (w == kNone) {
        if (dist_[f.u] + 1 != free_dist_) continue;
        via.push_back(v);
        for (std::size_t k = 0; k < stack.size(); ++k) {
          match_left_[stack[k].u] = via[k];
          match_right_[via[k]] = stack[k].u;
        }
        return true;
      }
      if (dist_[w] == dist_[f.u] + 1) {
        via.push_back(v);
        stack.push_back({w, 0});
      }
    }
    return false;
  }

  std::span<const BitSet> adj_;
  std::size_t n_;
  std::vector<std::size_t> match_left_, match_right_, dist_;
  std::size_t free_dist_ = kNone;
};

}  // namespace

std::size_t max_antichain_size(std::span<const BitSet> above) {
  if (above.empty()) return 0;
  return above.size() - HopcroftKarp(above).run();
}

}  // namespace fcr
