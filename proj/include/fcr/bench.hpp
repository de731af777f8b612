#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcr/lexicon.hpp"
#include "fcr/reduce.hpp"
#include "fcr/stats.hpp"

namespace fcr {

enum class Pipeline { raw_nextclosure, raw_addintent, wn_only, freq_only, wn_then_freq, freq_then_wn };

std::string_view to_string(Pipeline p);
Pipeline parse_pipeline(std::string_view text);
/// Every pipeline, in canonical order.
std::span<const Pipeline> all_pipelines();
bool uses_lexicon(Pipeline p);

struct BenchConfig {
  std::size_t num_objects = 100;
  std::vector<std::size_t> attribute_sweep{16, 32, 64, 128, 256, 512, 1024, 2048};
  std::vector<double> densities{0.10, 0.25, 0.50};
  /// Largest |M| run at a density; densities not listed are uncapped.
  std::vector<std::pair<double, std::size_t>> density_caps{{0.25, 512}, {0.50, 128}};
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  std::vector<Pipeline> pipelines{all_pipelines().begin(), all_pipelines().end()};
  ReductionParams params;
  std::shared_ptr<const Lexicon> lexicon;
  std::size_t concept_cap = std::size_t{1} << 20;
  std::size_t threads = 1;
  bool warmup = true;

  /// Throws InputError on an invalid configuration.
  void validate() const;
};

struct BenchRecord {
  Pipeline pipeline = Pipeline::raw_addintent;
  std::size_t objects = 0;
  std::size_t attributes = 0;
  double density = 0.0;
  std::uint64_t seed = 0;
  double reduce_ms = 0.0;
  double build_ms = 0.0;   // unset when capped
  double total_ms = 0.0;   // unset when capped
  std::size_t concepts = 0;  // concepts reached when capped
  std::size_t edges = 0;     // unset when capped
  bool capped = false;

  bool operator==(const BenchRecord&) const = default;
};

/// Seed of one (|M|, density, repeat) cell; every pipeline sees the same context.
std::uint64_t cell_seed(std::uint64_t master, std::size_t attributes, double density,
                        std::size_t repeat);

/// Records ordered by (density, |M|, repeat) cell, then by configured pipeline order.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

/// Lexicon over the labels of random_context: each block of `block`
/// consecutive attributes (and objects) hangs below the block's first label.
Lexicon synthetic_lexicon(std::size_t num_objects, std::size_t num_attributes,
                          std::size_t block = 4);

inline constexpr std::string_view kRecordsHeader =
    "pipeline,objects,attributes,density,seed,reduce_ms,build_ms,total_ms,concepts,edges";

void write_records_csv(std::span<const BenchRecord> records, std::ostream& out);
/// Throws ParseError with the offending line.
std::vector<BenchRecord> parse_records_csv(std::istream& in);

struct SignificanceRow {
  Pipeline a = Pipeline::raw_addintent;
  Pipeline b = Pipeline::raw_addintent;
  std::string metric;
  TTestResult test;
  bool significant = false;  // p < 0.05
};

/// Paired t-test of total_ms, a against b, matched by (|M|, density, seed).
/// Cells where either side was capped are left out. Throws InputError on
/// unmatched cells or when fewer than two pairs remain.
SignificanceRow significance_test(std::span<const BenchRecord> records, Pipeline a, Pipeline b);

/// significance_test for every pair of distinct pipelines present.
std::vector<SignificanceRow> significance_report(std::span<const BenchRecord> records);

void write_significance_csv(std::span<const SignificanceRow> rows, std::ostream& out);
std::string significance_table(std::span<const SignificanceRow> rows);

}  // namespace fcr
