#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcr/bitset.hpp"

namespace fcr {

/// Objects, attributes and a boolean incidence relation between them.
///
/// Immutable once constructed. Rows (per object) and columns (per
/// attribute) are both kept bit-packed, since closure computations
/// intersect along either axis.
class FormalContext {
 public:
  FormalContext() = default;

  /// Validates label uniqueness and row shapes; throws InputError.
  FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes,
                std::vector<BitSet> rows);

  /// Convenience for tests and fixtures: rows given as 0/1 values.
  static FormalContext from_table(std::vector<std::string> objects,
                                  std::vector<std::string> attributes,
                                  const std::vector<std::vector<int>>& table);

  std::size_t num_objects() const noexcept { return objects_.size(); }
  std::size_t num_attributes() const noexcept { return attributes_.size(); }

  const std::vector<std::string>& objects() const noexcept { return objects_; }
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }

  bool incident(std::size_t object, std::size_t attribute) const noexcept {
    return rows_[object].test(attribute);
  }
  const BitSet& row(std::size_t object) const noexcept { return rows_[object]; }
  const BitSet& column(std::size_t attribute) const noexcept { return columns_[attribute]; }
  const std::vector<BitSet>& rows() const noexcept { return rows_; }

  std::optional<std::size_t> object_index(std::string_view label) const;
  std::optional<std::size_t> attribute_index(std::string_view label) const;

  /// Number of true cells.
  std::size_t fill_count() const noexcept;
  /// Fill ratio; 0 for an empty matrix.
  double density() const noexcept;

  bool operator==(const FormalContext& other) const {
    return objects_ == other.objects_ && attributes_ == other.attributes_ &&
           rows_ == other.rows_;
  }

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> attributes_;
  std::vector<BitSet> rows_;
  std::vector<BitSet> columns_;
};

// Derivation operators. Sets are BitSets over the matching universe; the
// index-list overloads validate ranges and throw InputError.

/// Attributes shared by every object in `objects` (all attributes for the empty set).
BitSet object_intent(const FormalContext& ctx, const BitSet& objects);
BitSet object_intent(const FormalContext& ctx, std::span<const std::size_t> objects);

/// Objects having every attribute in `attributes` (all objects for the empty set).
BitSet attribute_extent(const FormalContext& ctx, const BitSet& attributes);
BitSet attribute_extent(const FormalContext& ctx, std::span<const std::size_t> attributes);

/// attributes'': the smallest intent containing `attributes`.
BitSet closure(const FormalContext& ctx, const BitSet& attributes);
BitSet closure(const FormalContext& ctx, std::span<const std::size_t> attributes);

/// Share of attributes the object has. Throws InputError when there are no attributes.
double row_frequency(const FormalContext& ctx, std::size_t object);
/// Share of objects having the attribute. Throws InputError when there are no objects.
double col_frequency(const FormalContext& ctx, std::size_t attribute);

enum class ContextFormat { cxt, csv };

/// Picks csv for a ".csv" extension and cxt otherwise.
ContextFormat format_for_path(const std::filesystem::path& path);

FormalContext parse_cxt(std::istream& in);
void write_cxt(const FormalContext& ctx, std::ostream& out);
FormalContext parse_csv(std::istream& in);
void write_csv(const FormalContext& ctx, std::ostream& out);

FormalContext read_context(const std::filesystem::path& path, ContextFormat format);
void write_context(const FormalContext& ctx, const std::filesystem::path& path,
                   ContextFormat format);

/// Bernoulli(density) cells from a seeded engine; labels g1.., m1...
FormalContext random_context(std::size_t num_objects, std::size_t num_attributes,
                             double density, std::uint64_t seed);

/// Context restricted to the kept objects and attributes, order preserved.
FormalContext subcontext(const FormalContext& ctx, const BitSet& keep_objects,
                         const BitSet& keep_attributes);

/// Swaps the roles of objects and attributes.
FormalContext transpose(const FormalContext& ctx);

}  // namespace fcr
