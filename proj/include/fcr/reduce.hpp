#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fcr/context.hpp"
#include "fcr/lexicon.hpp"

namespace fcr {

enum class Strategy { single_dual, multidisciplinary };
enum class ReductionMethod { wordnet, frequency, wn_then_freq, freq_then_wn };

std::string_view to_string(Strategy s);
std::string_view to_string(ReductionMethod m);
/// Accepts the snake_case names and the CLI's dashed spellings.
Strategy parse_strategy(std::string_view text);
ReductionMethod parse_method(std::string_view text);

struct ReductionParams {
  std::size_t hyper_depth = 4;
  std::size_t hypo_depth = 4;
  double threshold = 0.20;
  Strategy strategy = Strategy::multidisciplinary;
};

/// Original labels folded into one output label.
struct MergeGroup {
  std::vector<std::string> members;
  std::string label;

  bool operator==(const MergeGroup&) const = default;
};

/// Everything a reduction did, in enough detail to replay it.
///
/// Replay order follows `method`: merges (objects, then attributes) and
/// removals run in the order the method names them.
struct MergeTrace {
  std::vector<MergeGroup> object_merges;
  std::vector<MergeGroup> attribute_merges;
  std::vector<std::string> removed_objects;
  std::vector<std::string> removed_attributes;
  ReductionMethod method = ReductionMethod::wordnet;
  ReductionParams parameters;

  bool empty() const noexcept {
    return object_merges.empty() && attribute_merges.empty() && removed_objects.empty() &&
           removed_attributes.empty();
  }
};

struct Reduction {
  FormalContext context;
  MergeTrace trace;
};

/// Replaces `group` by one row, the OR of its members, at the first member's position.
FormalContext merge_rows(const FormalContext& ctx, std::span<const std::size_t> group,
                         const std::string& label);
/// Column counterpart of merge_rows.
FormalContext merge_cols(const FormalContext& ctx, std::span<const std::size_t> group,
                         const std::string& label);

/// Merges lexically related objects, then attributes.
Reduction wordnet_reduce(const FormalContext& ctx, const Lexicon& lex, std::size_t hyper_depth,
                         std::size_t hypo_depth, Strategy strategy);

/// Keeps objects and attributes whose input frequency is strictly above `threshold`.
Reduction freq_reduce(const FormalContext& ctx, double threshold);

/// `order` must be wn_then_freq or freq_then_wn.
Reduction hybrid_reduce(const FormalContext& ctx, const Lexicon& lex,
                        const ReductionParams& params, ReductionMethod order);

/// Dispatches on `method` with `params`.
Reduction reduce(const FormalContext& ctx, const Lexicon& lex, const ReductionParams& params,
                 ReductionMethod method);

/// Replays a trace on its input context. Throws InputError on unknown labels.
FormalContext apply_trace(const FormalContext& ctx, const MergeTrace& trace);

/// Label an original attribute ends up with, or nullopt when it was removed.
std::optional<std::string> translate_attribute(const MergeTrace& trace, const std::string& label);

nlohmann::json trace_to_json(const MergeTrace& trace);
MergeTrace trace_from_json(const nlohmann::json& doc);

}  // namespace fcr
