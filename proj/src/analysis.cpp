#include "fcr/analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fcr/error.hpp"

namespace fcr {

namespace {

// Dense multiplicity matrix plus neighbour lists; graphs here are small.
class DenseGraph {
 public:
  explicit DenseGraph(const HasseGraph& g)
      : n_(g.num_nodes), mult_(n_ * n_, 0), out_(n_), in_(n_), top_(g.top), bottom_(g.bottom) {
    for (auto [lo, up] : g.edges) {
      if (mult_[lo * n_ + up]++ == 0) {
        out_[lo].push_back(up);
        in_[up].push_back(lo);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::uint32_t mult(std::size_t a, std::size_t b) const noexcept { return mult_[a * n_ + b]; }
  const std::vector<std::size_t>& out(std::size_t v) const noexcept { return out_[v]; }
  const std::vector<std::size_t>& in(std::size_t v) const noexcept { return in_[v]; }
  std::size_t top() const noexcept { return top_; }
  std::size_t bottom() const noexcept { return bottom_; }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> mult_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::size_t top_, bottom_;
};

// Sparse view used for refinement, which must also run on large graphs.
struct Adjacency {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out, in;  // (neighbour, multiplicity)

  explicit Adjacency(const HasseGraph& g) : out(g.num_nodes), in(g.num_nodes) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
    for (const auto& e : g.edges) ++counts[e];
    for (const auto& [e, k] : counts) {
      out[e.first].emplace_back(e.second, k);
      in[e.second].emplace_back(e.first, k);
    }
  }
};

std::size_t degree(const std::vector<std::pair<std::size_t, std::size_t>>& adj) {
  std::size_t d = 0;
  for (const auto& [v, k] : adj) d += k;
  return d;
}

// Joint colour refinement. Returns false as soon as the colour histograms
// of the two graphs differ, which proves non-isomorphism.
bool refine(const HasseGraph& ga, const HasseGraph& gb, std::vector<std::size_t>& ca,
            std::vector<std::size_t>& cb) {
  Adjacency aa(ga), ab(gb);
  const std::size_t n = ga.num_nodes;
  std::map<std::vector<std::size_t>, std::size_t> palette;
  auto initial = [&](const HasseGraph& g, const Adjacency& adj, std::vector<std::size_t>& colors) {
    colors.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> sig{degree(adj.in[v]), degree(adj.out[v]), v == g.top,
                                   v == g.bottom};
      colors[v] = palette.emplace(std::move(sig), palette.size()).first->second;
    }
  };
  initial(ga, aa, ca);
  initial(gb, ab, cb);

  auto histogram_matches = [&] {
    std::vector<std::size_t> ha(palette.size(), 0), hb(palette.size(), 0);
    for (std::size_t c : ca) ++ha[c];
    for (std::size_t c : cb) ++hb[c];
    return ha == hb;
  };
  if (!histogram_matches()) return false;

  std::size_t classes = 0;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> next_palette;
    auto step = [&](const Adjacency& adj, const std::vector<std::size_t>& colors) {
      std::vector<std::size_t> next(n);
      for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::pair<std::size_t, std::size_t>> up, down;
        for (auto [u, k] : adj.out[v]) up.emplace_back(colors[u], k);
        for (auto [u, k] : adj.in[v]) down.emplace_back(colors[u], k);
        std::sort(up.begin(), up.end());
        std::sort(down.begin(), down.end());
        std::vector<std::size_t> sig{colors[v], up.size()};
        for (auto [c, k] : up) sig.insert(sig.end(), {c, k});
        for (auto [c, k] : down) sig.insert(sig.end(), {c, k});
        next[v] = next_palette.emplace(std::move(sig), next_palette.size()).first->second;
      }
      return next;
    };
    ca = step(aa, ca);
    cb = step(ab, cb);
    palette.swap(next_palette);
    if (!histogram_matches()) return false;
    std::size_t now = std::set<std::size_t>(ca.begin(), ca.end()).size();
    if (now == classes) return true;
    classes = now;
  }
}

class Matcher {
 public:
  Matcher(const DenseGraph& a, const DenseGraph& b, const std::vector<std::size_t>& ca,
          const std::vector<std::size_t>& cb)
      : a_(a), b_(b), ca_(ca), cb_(cb), map_(a.size(), kUnmapped), used_(b.size(), false) {
    // Visit nodes of `a` breadth-first from the bottom so most candidates
    // are constrained by an already mapped neighbour.
    std::vector<bool> seen(a.size(), false);
    for (std::size_t start : {a.bottom()}) {
      std::vector<std::size_t> queue{start};
      seen[start] = true;
      for (std::size_t h = 0; h < queue.size(); ++h) {
        std::size_t v = queue[h];
        order_.push_back(v);
        for (const auto* list : {&a.out(v), &a.in(v)}) {
          for (std::size_t u : *list) {
            if (!seen[u]) {
              seen[u] = true;
              queue.push_back(u);
            }
          }
        }
      }
    }
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (!seen[v]) order_.push_back(v);
    }
  }

  bool run() { return extend(0); }

 private:
  static constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);

  bool consistent(std::size_t v, std::size_t w) const {
    if (ca_[v] != cb_[w] || used_[w]) return false;
    for (std::size_t k = 0; k < depth_; ++k) {
      std::size_t u = order_[k];
      std::size_t fu = map_[u];
      if (a_.mult(v, u) != b_.mult(w, fu) || a_.mult(u, v) != b_.mult(fu, w)) return false;
    }
    return true;
  }

  bool try_candidate(std::size_t pos, std::size_t v, std::size_t w) {
    if (!consistent(v, w)) return false;
    map_[v] = w;
    used_[w] = true;
    ++depth_;
    if (extend(pos + 1)) return true;
    --depth_;
    used_[w] = false;
    map_[v] = kUnmapped;
    return false;
  }

  bool extend(std::size_t pos) {
    if (pos == order_.size()) return true;
    std::size_t v = order_[pos];
    // Candidates come from the image of a mapped neighbour when there is one.
    for (const auto* list : {&a_.out(v), &a_.in(v)}) {
      for (std::size_t u : *list) {
        if (map_[u] == kUnmapped) continue;
        const auto& pool = list == &a_.out(v) ? b_.in(map_[u]) : b_.out(map_[u]);
        for (std::size_t w : pool) {
          if (try_candidate(pos, v, w)) return true;
        }
        return false;
      }
    }
    for (std::size_t w = 0; w < b_.size(); ++w) {
      if (try_candidate(pos, v, w)) return true;
    }
    return false;
  }

  const DenseGraph& a_;
  const DenseGraph& b_;
  const std::vector<std::size_t>& ca_;
  const std::vector<std::size_t>& cb_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> map_;
  std::vector<bool> used_;
  std::size_t depth_ = 0;
};

// Reachability in the reduced lattice, from its covers alone.
std::vector<BitSet> strict_up_sets(const ConceptLattice& lattice) {
  const std::size_t n = lattice.size();
  std::vector<std::vector<std::size_t>> uppers(n);
  std::vector<std::size_t> pending(n, 0);
  for (auto [c, p] : lattice.covers) {
    uppers[c].push_back(p);
    ++pending[c];
  }
  std::vector<std::vector<std::size_t>> lowers(n);
  for (auto [c, p] : lattice.covers) lowers[p].push_back(c);
  std::vector<BitSet> above(n, BitSet(n));
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (pending[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    std::size_t v = ready.back();
    ready.pop_back();
    for (std::size_t p : uppers[v]) {
      above[v] |= above[p];
      above[v].set(p);
    }
    for (std::size_t c : lowers[v]) {
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  return above;
}

double reduction_ratio(std::size_t a, std::size_t b) {
  if (a == 0) return 0.0;
  return (static_cast<double>(a) - static_cast<double>(b)) / static_cast<double>(a);
}

}  // namespace

HasseGraph HasseGraph::from_lattice(const ConceptLattice& lattice) {
  HasseGraph g;
  g.num_nodes = lattice.size();
  g.edges.assign(lattice.covers.begin(), lattice.covers.end());
  g.top = lattice.top;
  g.bottom = lattice.bottom;
  return g;
}

HasseGraph subdivide_edge(const HasseGraph& graph, std::size_t edge) {
  if (edge >= graph.edges.size()) throw InputError("edge index out of range");
  HasseGraph g = graph;
  auto [lo, up] = g.edges[edge];
  std::size_t mid = g.num_nodes++;
  g.edges[edge] = {lo, mid};
  g.edges.emplace_back(mid, up);
  return g;
}

HasseGraph smooth(const HasseGraph& graph) {
  // Smoothing a node never changes another node's degrees, so the removable
  // set is fixed up front; kept nodes are then joined through chains of
  // removable ones.
  const std::size_t n = graph.num_nodes;
  std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  for (auto [lo, up] : graph.edges) {
    ++outdeg[lo];
    ++indeg[up];
    out[lo].push_back(up);
  }
  std::vector<bool> removable(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    removable[v] = v != graph.top && v != graph.bottom && indeg[v] == 1 && outdeg[v] == 1;
  }
  std::vector<std::size_t> index(n, 0);
  HasseGraph g;
  for (std::size_t v = 0; v < n; ++v) {
    if (!removable[v]) index[v] = g.num_nodes++;
  }
  g.top = index[graph.top];
  g.bottom = index[graph.bottom];
  for (std::size_t v = 0; v < n; ++v) {
    if (removable[v]) continue;
    for (std::size_t u : out[v]) {
      while (removable[u]) u = out[u].front();
      g.edges.emplace_back(index[v], index[u]);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

bool is_isomorphic(const HasseGraph& a, const HasseGraph& b, const IsomorphismOptions& options) {
  if (a.num_nodes != b.num_nodes || a.edges.size() != b.edges.size()) return false;
  if (a.num_nodes == 0) return true;
  std::vector<std::size_t> ca, cb;
  if (!refine(a, b, ca, cb)) return false;
  if (a.num_nodes > options.max_nodes) {
    throw CapacityError("isomorphism search limited to " + std::to_string(options.max_nodes) +
                            " nodes",
                        a.num_nodes);
  }
  DenseGraph da(a), db(b);
  return Matcher(da, db, ca, cb).run();
}

bool is_isomorphic(const ConceptLattice& a, const ConceptLattice& b,
                   const IsomorphismOptions& options) {
  return is_isomorphic(HasseGraph::from_lattice(a), HasseGraph::from_lattice(b), options);
}

bool is_homeomorphic(const HasseGraph& a, const HasseGraph& b, const IsomorphismOptions& options) {
  return is_isomorphic(smooth(a), smooth(b), options);
}

bool is_homeomorphic(const ConceptLattice& a, const ConceptLattice& b,
                     const IsomorphismOptions& options) {
  return is_homeomorphic(HasseGraph::from_lattice(a), HasseGraph::from_lattice(b), options);
}

double similarity(const ConceptLattice& original, const ConceptLattice& reduced,
                  const FormalContext& ctx_reduced, const MergeTrace& trace) {
  if (original.covers.empty()) return 1.0;

  // Reduced concepts keyed by intent over ctx_reduced's attribute indices.
  std::vector<std::size_t> column_of(reduced.attribute_labels.size());
  for (std::size_t i = 0; i < reduced.attribute_labels.size(); ++i) {
    auto idx = ctx_reduced.attribute_index(reduced.attribute_labels[i]);
    if (!idx) {
      throw InputError("reduced lattice attribute '" + reduced.attribute_labels[i] +
                       "' is not in the reduced context");
    }
    column_of[i] = *idx;
  }
  std::unordered_map<BitSet, std::size_t, BitSetHash> by_intent;
  for (std::size_t c = 0; c < reduced.size(); ++c) {
    BitSet intent(ctx_reduced.num_attributes());
    reduced.concepts[c].intent.for_each([&](std::size_t m) { intent.set(column_of[m]); });
    by_intent.emplace(std::move(intent), c);
  }

  std::vector<std::optional<std::size_t>> translated(original.attribute_labels.size());
  for (std::size_t m = 0; m < original.attribute_labels.size(); ++m) {
    auto label = translate_attribute(trace, original.attribute_labels[m]);
    if (!label) continue;
    auto idx = ctx_reduced.attribute_index(*label);
    if (!idx) {
      throw InputError("attribute '" + original.attribute_labels[m] +
                       "' cannot be translated into the reduced context");
    }
    translated[m] = *idx;
  }
  std::vector<std::size_t> image(original.size());
  for (std::size_t c = 0; c < original.size(); ++c) {
    BitSet attrs(ctx_reduced.num_attributes());
    original.concepts[c].intent.for_each([&](std::size_t m) {
      if (translated[m]) attrs.set(*translated[m]);
    });
    auto it = by_intent.find(closure(ctx_reduced, attrs));
    if (it == by_intent.end()) {
      throw InputError("image of concept " + std::to_string(c) + " is not in the reduced lattice");
    }
    image[c] = it->second;
  }

  auto above = strict_up_sets(reduced);
  std::size_t preserved = 0;
  for (auto [c, p] : original.covers) {
    std::size_t lo = image[c], up = image[p];
    if (lo == up || above[lo].test(up)) ++preserved;
  }
  return static_cast<double>(preserved) / static_cast<double>(original.covers.size());
}

ComparisonReport compare(const ConceptLattice& a, const ConceptLattice& b,
                         const FormalContext& ctx_b, const MergeTrace& trace,
                         const IsomorphismOptions& options) {
  ComparisonReport r;
  r.invariants_a = invariants(a);
  r.invariants_b = invariants(b);
  auto diff = [](std::size_t x, std::size_t y) {
    return static_cast<long long>(x) - static_cast<long long>(y);
  };
  r.delta.concepts = diff(r.invariants_a.concept_count, r.invariants_b.concept_count);
  r.delta.edges = diff(r.invariants_a.edge_count, r.invariants_b.edge_count);
  r.delta.height = diff(r.invariants_a.height, r.invariants_b.height);
  r.delta.width_lo = diff(r.invariants_a.width_lo, r.invariants_b.width_lo);
  r.delta.width_hi = diff(r.invariants_a.width_hi, r.invariants_b.width_hi);
  r.delta.concept_reduction =
      reduction_ratio(r.invariants_a.concept_count, r.invariants_b.concept_count);
  r.delta.edge_reduction = reduction_ratio(r.invariants_a.edge_count, r.invariants_b.edge_count);
  r.isomorphic = is_isomorphic(a, b, options);
  r.homeomorphic = r.isomorphic || is_homeomorphic(a, b, options);
  r.similarity = similarity(a, b, ctx_b, trace);
  return r;
}

nlohmann::json invariants_to_json(const LatticeInvariants& inv) {
  return {{"concepts", inv.concept_count},
          {"edges", inv.edge_count},
          {"height", inv.height},
          {"width", {inv.width_lo, inv.width_hi}}};
}

nlohmann::json report_to_json(const ComparisonReport& report) {
  const auto& d = report.delta;
  return {{"original", invariants_to_json(report.invariants_a)},
          {"reduced", invariants_to_json(report.invariants_b)},
          {"delta",
           {{"concepts", d.concepts},
            {"edges", d.edges},
            {"height", d.height},
            {"width_lo", d.width_lo},
            {"width_hi", d.width_hi},
            {"concept_reduction", d.concept_reduction},
            {"edge_reduction", d.edge_reduction}}},
          {"isomorphic", report.isomorphic},
          {"homeomorphic", report.homeomorphic},
          {"similarity", report.similarity}};
}

std::string report_table(const ComparisonReport& report) {
  const auto& a = report.invariants_a;
  const auto& b = report.invariants_b;
  const auto& d = report.delta;
  std::ostringstream out;
  auto row = [&](const char* name, std::size_t x, std::size_t y, long long delta,
                 const std::string& extra) {
    out << std::left << std::setw(14) << name << std::right << std::setw(10) << x
        << std::setw(10) << y << std::setw(10) << delta << "  " << extra << '\n';
  };
  auto pct = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v * 100.0 << '%';
    return s.str();
  };
  out << std::left << std::setw(14) << "metric" << std::right << std::setw(10) << "original"
      << std::setw(10) << "reduced" << std::setw(10) << "delta" << "  reduction\n";
  row("concepts", a.concept_count, b.concept_count, d.concepts, pct(d.concept_reduction));
  row("edges", a.edge_count, b.edge_count, d.edges, pct(d.edge_reduction));
  row("height", a.height, b.height, d.height, "");
  row("width_lo", a.width_lo, b.width_lo, d.width_lo, "");
  row("width_hi", a.width_hi, b.width_hi, d.width_hi, "");
  out << std::left << std::setw(14) << "isomorphic" << (report.isomorphic ? "yes" : "no") << '\n';
  out << std::left << std::setw(14) << "homeomorphic" << (report.homeomorphic ? "yes" : "no")
      << '\n';
  out << std::left << std::setw(14) << "similarity" << std::fixed << std::setprecision(4)
      << report.similarity << '\n';
  return out.str();
}

}  // namespace fcr
