#include "fcr/reduce.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "fcr/error.hpp"

namespace fcr {

namespace {

std::vector<std::string> split_label(const std::string& label) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = label.find('/', start);
    parts.push_back(label.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

// One row (or column) while merging: current label, the original labels it
// absorbed, and its incidence values.
struct Item {
  std::string label;
  std::vector<Lexicon::Term> terms;  // one per '/'-separated component
  std::vector<std::size_t> originals;
  BitSet values;
};

class AxisMerger {
 public:
  AxisMerger(const Lexicon& lex, std::size_t hyper_depth, std::size_t hypo_depth)
      : lex_(lex), hyper_(hyper_depth), hypo_(hypo_depth) {}

  // Relation of two items; merged labels relate through any component.
  Relation relation(const Item& a, const Item& b) const {
    Relation best = Relation::none;
    for (const auto& ta : a.terms) {
      for (const auto& tb : b.terms) {
        Relation r = lex_.related(ta, tb, hyper_, hypo_);
        if (r == Relation::synonym) return r;
        if (r == Relation::b_generalizes_a) {
          best = r;
        } else if (r == Relation::a_generalizes_b && best == Relation::none) {
          best = r;
        }
      }
    }
    return best;
  }

  void relabel(Item& item, std::string label) const {
    item.label = std::move(label);
    item.terms.clear();
    for (const auto& part : split_label(item.label)) item.terms.push_back(lex_.term(part));
  }

  Item make_item(const std::string& label, std::size_t original, BitSet values) const {
    Item item;
    relabel(item, label);
    item.originals = {original};
    item.values = std::move(values);
    return item;
  }

  // Folds `other` into `into`, naming the result after the more general side.
  void absorb(Item& into, Item&& other) const {
    Relation r = relation(into, other);
    std::string label = most_generic(into.label, other.label,
                                     r == Relation::none ? Relation::synonym : r);
    into.values |= other.values;
    into.originals.insert(into.originals.end(), other.originals.begin(), other.originals.end());
    std::sort(into.originals.begin(), into.originals.end());
    relabel(into, std::move(label));
  }

  void single_dual(std::vector<Item>& items) const {
    bool merged = true;
    while (merged) {
      merged = false;
      const std::size_t n = items.size();
      for (std::size_t i = n - 1; i-- > 0 && !merged;) {
        for (std::size_t j = n; j-- > i + 1;) {
          if (relation(items[i], items[j]) != Relation::none) {
            absorb(items[i], std::move(items[j]));
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(j));
            merged = true;
            break;
          }
        }
      }
    }
  }

  void multidisciplinary(std::vector<Item>& items) const {
    for (std::size_t pivot = 0; pivot < items.size(); ++pivot) {
      std::vector<std::size_t> group;
      for (std::size_t q = pivot + 1; q < items.size(); ++q) {
        if (relation(items[pivot], items[q]) != Relation::none) group.push_back(q);
      }
      if (group.empty()) continue;
      for (std::size_t q : group) absorb(items[pivot], std::move(items[q]));
      for (std::size_t k = group.size(); k-- > 0;) {
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(group[k]));
      }
    }
  }

 private:
  const Lexicon& lex_;
  std::size_t hyper_, hypo_;
};

std::vector<MergeGroup> collect_groups(const std::vector<Item>& items,
                                       const std::vector<std::string>& original_labels) {
  std::vector<MergeGroup> groups;
  for (const auto& item : items) {
    if (item.originals.size() < 2) continue;
    MergeGroup g;
    for (std::size_t o : item.originals) g.members.push_back(original_labels[o]);
    g.label = item.label;
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<Item> merge_axis(const AxisMerger& merger, const std::vector<std::string>& labels,
                             const std::vector<BitSet>& lines, Strategy strategy) {
  std::vector<Item> items;
  items.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    items.push_back(merger.make_item(labels[i], i, lines[i]));
  }
  if (items.size() >= 2) {
    if (strategy == Strategy::single_dual) {
      merger.single_dual(items);
    } else {
      merger.multidisciplinary(items);
    }
  }
  return items;
}

std::vector<std::size_t> indices_of(const std::vector<std::string>& labels,
                                    const std::vector<std::string>& wanted, const char* kind) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  std::vector<std::size_t> out;
  for (const auto& w : wanted) {
    auto it = index.find(w);
    if (it == index.end()) {
      throw InputError(std::string("trace names unknown ") + kind + " '" + w + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

FormalContext apply_merges(FormalContext ctx, const MergeTrace& trace) {
  for (const auto& g : trace.object_merges) {
    ctx = merge_rows(ctx, indices_of(ctx.objects(), g.members, "object"), g.label);
  }
  for (const auto& g : trace.attribute_merges) {
    ctx = merge_cols(ctx, indices_of(ctx.attributes(), g.members, "attribute"), g.label);
  }
  return ctx;
}

FormalContext apply_removals(const FormalContext& ctx, const MergeTrace& trace) {
  BitSet keep_objects = BitSet::full(ctx.num_objects());
  BitSet keep_attributes = BitSet::full(ctx.num_attributes());
  for (std::size_t g : indices_of(ctx.objects(), trace.removed_objects, "object")) {
    keep_objects.reset(g);
  }
  for (std::size_t m : indices_of(ctx.attributes(), trace.removed_attributes, "attribute")) {
    keep_attributes.reset(m);
  }
  return subcontext(ctx, keep_objects, keep_attributes);
}

void append(MergeTrace& into, const MergeTrace& from) {
  auto cat = [](auto& a, const auto& b) { a.insert(a.end(), b.begin(), b.end()); };
  cat(into.object_merges, from.object_merges);
  cat(into.attribute_merges, from.attribute_merges);
  cat(into.removed_objects, from.removed_objects);
  cat(into.removed_attributes, from.removed_attributes);
}

}  // namespace

std::string_view to_string(Strategy s) {
  return s == Strategy::single_dual ? "single_dual" : "multidisciplinary";
}

std::string_view to_string(ReductionMethod m) {
  switch (m) {
    case ReductionMethod::wordnet: return "wordnet";
    case ReductionMethod::frequency: return "frequency";
    case ReductionMethod::wn_then_freq: return "wn_then_freq";
    case ReductionMethod::freq_then_wn: return "freq_then_wn";
  }
  return "wordnet";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "single_dual" || text == "single-dual") return Strategy::single_dual;
  if (text == "multidisciplinary") return Strategy::multidisciplinary;
  throw InputError("unknown strategy '" + std::string(text) + "'");
}

ReductionMethod parse_method(std::string_view text) {
  if (text == "wordnet") return ReductionMethod::wordnet;
  if (text == "frequency") return ReductionMethod::frequency;
  if (text == "wn_then_freq" || text == "wn-then-freq") return ReductionMethod::wn_then_freq;
  if (text == "freq_then_wn" || text == "freq-then-wn") return ReductionMethod::freq_then_wn;
  throw InputError("unknown reduction method '" + std::string(text) + "'");
}

FormalContext merge_rows(const FormalContext& ctx, std::span<const std::size_t> group,
                         const std::string& label) {
  BitSet members(ctx.num_objects());
  for (std::size_t g : group) {
    if (g >= ctx.num_objects()) throw InputError("object index out of range in merge group");
    members.set(g);
  }
  if (members.count() < 2) throw InputError("a merge group needs at least two members");
  for (std::size_t g = 0; g < ctx.num_objects(); ++g) {
    if (!members.test(g) && ctx.objects()[g] == label) {
      throw InputError("merged label '" + label + "' collides with a surviving object");
    }
  }
  const std::size_t first = members.find_first();
  std::vector<std::string> objects;
  std::vector<BitSet> rows;
  for (std::size_t g = 0; g < ctx.num_objects(); ++g) {
    if (g == first) {
      BitSet merged(ctx.num_attributes());
      members.for_each([&](std::size_t k) { merged |= ctx.row(k); });
      objects.push_back(label);
      rows.push_back(std::move(merged));
    } else if (!members.test(g)) {
      objects.push_back(ctx.objects()[g]);
      rows.push_back(ctx.row(g));
    }
  }
  return FormalContext(std::move(objects), ctx.attributes(), std::move(rows));
}

FormalContext merge_cols(const FormalContext& ctx, std::span<const std::size_t> group,
                         const std::string& label) {
  for (std::size_t m : group) {
    if (m >= ctx.num_attributes()) throw InputError("attribute index out of range in merge group");
  }
  return transpose(merge_rows(transpose(ctx), group, label));
}

Reduction wordnet_reduce(const FormalContext& ctx, const Lexicon& lex, std::size_t hyper_depth,
                         std::size_t hypo_depth, Strategy strategy) {
  AxisMerger merger(lex, hyper_depth, hypo_depth);
  Reduction result;
  result.trace.method = ReductionMethod::wordnet;
  result.trace.parameters.hyper_depth = hyper_depth;
  result.trace.parameters.hypo_depth = hypo_depth;
  result.trace.parameters.strategy = strategy;

  auto objects = merge_axis(merger, ctx.objects(), ctx.rows(), strategy);
  result.trace.object_merges = collect_groups(objects, ctx.objects());
  std::vector<std::string> object_labels;
  std::vector<BitSet> rows;
  for (auto& item : objects) {
    object_labels.push_back(std::move(item.label));
    rows.push_back(std::move(item.values));
  }
  FormalContext after_objects(std::move(object_labels), ctx.attributes(), std::move(rows));

  FormalContext flipped = transpose(after_objects);
  auto attributes = merge_axis(merger, flipped.objects(), flipped.rows(), strategy);
  result.trace.attribute_merges = collect_groups(attributes, ctx.attributes());
  std::vector<std::string> attribute_labels;
  std::vector<BitSet> columns;
  for (auto& item : attributes) {
    attribute_labels.push_back(std::move(item.label));
    columns.push_back(std::move(item.values));
  }
  result.context = transpose(
      FormalContext(std::move(attribute_labels), flipped.attributes(), std::move(columns)));
  return result;
}

Reduction freq_reduce(const FormalContext& ctx, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InputError("threshold must lie in [0, 1]");
  Reduction result;
  result.trace.method = ReductionMethod::frequency;
  result.trace.parameters.threshold = threshold;

  // Frequencies come from the input context only; an empty opposite
  // dimension counts as frequency 0.
  BitSet keep_objects(ctx.num_objects());
  BitSet keep_attributes(ctx.num_attributes());
  for (std::size_t g = 0; g < ctx.num_objects(); ++g) {
    double f = ctx.num_attributes() ? row_frequency(ctx, g) : 0.0;
    if (f > threshold) {
      keep_objects.set(g);
    } else {
      result.trace.removed_objects.push_back(ctx.objects()[g]);
    }
  }
  for (std::size_t m = 0; m < ctx.num_attributes(); ++m) {
    double f = ctx.num_objects() ? col_frequency(ctx, m) : 0.0;
    if (f > threshold) {
      keep_attributes.set(m);
    } else {
      result.trace.removed_attributes.push_back(ctx.attributes()[m]);
    }
  }
  result.context = subcontext(ctx, keep_objects, keep_attributes);
  return result;
}

Reduction hybrid_reduce(const FormalContext& ctx, const Lexicon& lex,
                        const ReductionParams& params, ReductionMethod order) {
  Reduction result;
  if (order == ReductionMethod::wn_then_freq) {
    Reduction wn = wordnet_reduce(ctx, lex, params.hyper_depth, params.hypo_depth, params.strategy);
    Reduction fr = freq_reduce(wn.context, params.threshold);
    result.context = std::move(fr.context);
    result.trace = std::move(wn.trace);
    append(result.trace, fr.trace);
  } else if (order == ReductionMethod::freq_then_wn) {
    Reduction fr = freq_reduce(ctx, params.threshold);
    Reduction wn =
        wordnet_reduce(fr.context, lex, params.hyper_depth, params.hypo_depth, params.strategy);
    result.context = std::move(wn.context);
    result.trace = std::move(fr.trace);
    append(result.trace, wn.trace);
  } else {
    throw InputError("hybrid order must be wn_then_freq or freq_then_wn");
  }
  result.trace.method = order;
  result.trace.parameters = params;
  return result;
}

Reduction reduce(const FormalContext& ctx, const Lexicon& lex, const ReductionParams& params,
                 ReductionMethod method) {
  switch (method) {
    case ReductionMethod::wordnet: {
      Reduction r =
          wordnet_reduce(ctx, lex, params.hyper_depth, params.hypo_depth, params.strategy);
      r.trace.parameters = params;
      return r;
    }
    case ReductionMethod::frequency: {
      Reduction r = freq_reduce(ctx, params.threshold);
      r.trace.parameters = params;
      return r;
    }
    default:
      return hybrid_reduce(ctx, lex, params, method);
  }
}

FormalContext apply_trace(const FormalContext& ctx, const MergeTrace& trace) {
  if (trace.method == ReductionMethod::freq_then_wn) {
    return apply_merges(apply_removals(ctx, trace), trace);
  }
  return apply_removals(apply_merges(ctx, trace), trace);
}

std::optional<std::string> translate_attribute(const MergeTrace& trace, const std::string& label) {
  auto removed = [&](const std::string& l) {
    return std::find(trace.removed_attributes.begin(), trace.removed_attributes.end(), l) !=
           trace.removed_attributes.end();
  };
  auto merged = [&](const std::string& l) -> std::string {
    for (const auto& g : trace.attribute_merges) {
      if (std::find(g.members.begin(), g.members.end(), l) != g.members.end()) return g.label;
    }
    return l;
  };
  if (trace.method == ReductionMethod::freq_then_wn) {
    if (removed(label)) return std::nullopt;
    return merged(label);
  }
  std::string out = merged(label);
  if (removed(out)) return std::nullopt;
  return out;
}

nlohmann::json trace_to_json(const MergeTrace& trace) {
  auto groups = [](const std::vector<MergeGroup>& gs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : gs) arr.push_back({{"members", g.members}, {"label", g.label}});
    return arr;
  };
  return {{"method", to_string(trace.method)},
          {"parameters",
           {{"hyper_depth", trace.parameters.hyper_depth},
            {"hypo_depth", trace.parameters.hypo_depth},
            {"threshold", trace.parameters.threshold},
            {"strategy", to_string(trace.parameters.strategy)}}},
          {"object_merges", groups(trace.object_merges)},
          {"attribute_merges", groups(trace.attribute_merges)},
          {"removed_objects", trace.removed_objects},
          {"removed_attributes", trace.removed_attributes}};
}

MergeTrace trace_from_json(const nlohmann::json& doc) {
  try {
    MergeTrace t;
    t.method = parse_method(doc.at("method").get<std::string>());
    const auto& p = doc.at("parameters");
    t.parameters.hyper_depth = p.at("hyper_depth").get<std::size_t>();
    t.parameters.hypo_depth = p.at("hypo_depth").get<std::size_t>();
    t.parameters.threshold = p.at("threshold").get<double>();
    t.parameters.strategy = parse_strategy(p.at("strategy").get<std::string>());
    auto groups = [](const nlohmann::json& arr) {
      std::vector<MergeGroup> gs;
      for (const auto& g : arr) {
        gs.push_back({g.at("members").get<std::vector<std::string>>(),
                      g.at("label").get<std::string>()});
      }
      return gs;
    };
    t.object_merges = groups(doc.at("object_merges"));
    t.attribute_merges = groups(doc.at("attribute_merges"));
    t.removed_objects = doc.at("removed_objects").get<std::vector<std::string>>();
    t.removed_attributes = doc.at("removed_attributes").get<std::vector<std::string>>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed trace JSON: ") + e.what(), 0);
  }
}

}  // namespace fcr
