#include "fcr/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "fcr/context.hpp"
#include "fcr/error.hpp"
#include "fcr/lattice.hpp"

namespace fcr {

namespace {

constexpr std::array<Pipeline, 6> kPipelines{Pipeline::raw_nextclosure, Pipeline::raw_addintent,
                                             Pipeline::wn_only,         Pipeline::freq_only,
                                             Pipeline::wn_then_freq,    Pipeline::freq_then_wn};
constexpr std::array<std::string_view, 6> kPipelineNames{
    "raw_nextclosure", "raw_addintent", "wn_only", "freq_only", "wn_then_freq", "freq_then_wn"};
constexpr std::string_view kCapped = "capped";

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t double_bits(double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  return bits;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

struct Cell {
  std::size_t attributes;
  double density;
  std::size_t repeat;
};

BenchRecord run_pipeline(const FormalContext& ctx, Pipeline pipeline, const BenchConfig& cfg) {
  BenchRecord rec;
  rec.pipeline = pipeline;
  LatticeOptions options;
  options.concept_cap = cfg.concept_cap;

  static const Lexicon kEmpty;
  const Lexicon& lex = cfg.lexicon ? *cfg.lexicon : kEmpty;
  auto start = std::chrono::steady_clock::now();
  std::optional<Reduction> reduced;
  switch (pipeline) {
    case Pipeline::raw_nextclosure:
    case Pipeline::raw_addintent:
      break;
    case Pipeline::wn_only:
      reduced = reduce(ctx, lex, cfg.params, ReductionMethod::wordnet);
      break;
    case Pipeline::freq_only:
      reduced = reduce(ctx, lex, cfg.params, ReductionMethod::frequency);
      break;
    case Pipeline::wn_then_freq:
      reduced = reduce(ctx, lex, cfg.params, ReductionMethod::wn_then_freq);
      break;
    case Pipeline::freq_then_wn:
      reduced = reduce(ctx, lex, cfg.params, ReductionMethod::freq_then_wn);
      break;
  }
  rec.reduce_ms = reduced ? elapsed_ms(start) : 0.0;

  const FormalContext& input = reduced ? reduced->context : ctx;
  auto algorithm = pipeline == Pipeline::raw_nextclosure ? LatticeAlgorithm::nextclosure
                                                         : LatticeAlgorithm::addintent;
  auto build_start = std::chrono::steady_clock::now();
  try {
    ConceptLattice lattice = build_lattice(input, algorithm, options);
    rec.build_ms = elapsed_ms(build_start);
    rec.total_ms = rec.reduce_ms + rec.build_ms;
    rec.concepts = lattice.size();
    rec.edges = lattice.covers.size();
  } catch (const CapacityError& e) {
    rec.capped = true;
    rec.concepts = e.reached();
  }
  return rec;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(field) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

using CellKey = std::tuple<std::size_t, double, std::uint64_t>;

CellKey key_of(const BenchRecord& r) { return {r.attributes, r.density, r.seed}; }

}  // namespace

std::string_view to_string(Pipeline p) { return kPipelineNames[static_cast<std::size_t>(p)]; }

Pipeline parse_pipeline(std::string_view text) {
  std::string norm(text);
  std::replace(norm.begin(), norm.end(), '-', '_');
  for (std::size_t i = 0; i < kPipelines.size(); ++i) {
    if (norm == kPipelineNames[i]) return kPipelines[i];
  }
  throw InputError("unknown pipeline '" + std::string(text) + "'");
}

std::span<const Pipeline> all_pipelines() { return kPipelines; }

bool uses_lexicon(Pipeline p) {
  return p == Pipeline::wn_only || p == Pipeline::wn_then_freq || p == Pipeline::freq_then_wn;
}

void BenchConfig::validate() const {
  if (num_objects < 1) throw InputError("bench needs at least one object");
  if (repeats < 1) throw InputError("repeats must be at least 1");
  if (attribute_sweep.empty()) throw InputError("attribute sweep is empty");
  for (std::size_t m : attribute_sweep) {
    if (m < 1) throw InputError("attribute counts must be at least 1");
  }
  if (densities.empty()) throw InputError("density list is empty");
  for (double d : densities) {
    if (!(d >= 0.0 && d <= 1.0)) throw InputError("densities must lie in [0,1]");
  }
  if (pipelines.empty()) throw InputError("no pipelines selected");
  if (!(params.threshold >= 0.0 && params.threshold <= 1.0)) {
    throw InputError("threshold must lie in [0,1]");
  }
  if (threads < 1) throw InputError("threads must be at least 1");
  bool needs_lexicon = std::any_of(pipelines.begin(), pipelines.end(), uses_lexicon);
  if (needs_lexicon && !lexicon) {
    throw InputError("a lexicon is required for the wordnet pipelines");
  }
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t attributes, double density,
                        std::size_t repeat) {
  std::uint64_t h = splitmix(master);
  h = splitmix(h ^ attributes);
  h = splitmix(h ^ double_bits(density));
  return splitmix(h ^ repeat);
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (double d : config.densities) {
    std::size_t cap = static_cast<std::size_t>(-1);
    for (auto [density, limit] : config.density_caps) {
      if (density == d) cap = limit;
    }
    for (std::size_t m : config.attribute_sweep) {
      if (m > cap) continue;
      for (std::size_t r = 0; r < config.repeats; ++r) cells.push_back({m, d, r});
    }
  }

  std::vector<std::vector<BenchRecord>> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& cell = cells[i];
      std::uint64_t seed = cell_seed(config.seed, cell.attributes, cell.density, cell.repeat);
      FormalContext ctx = random_context(config.num_objects, cell.attributes, cell.density, seed);
      for (Pipeline p : config.pipelines) {
        if (config.warmup) run_pipeline(ctx, p, config);
        BenchRecord rec = run_pipeline(ctx, p, config);
        rec.objects = config.num_objects;
        rec.attributes = cell.attributes;
        rec.density = cell.density;
        rec.seed = seed;
        results[i].push_back(rec);
      }
    }
  };
  std::size_t nthreads = std::min(config.threads, std::max<std::size_t>(cells.size(), 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }

  std::vector<BenchRecord> out;
  for (auto& batch : results) out.insert(out.end(), batch.begin(), batch.end());
  return out;
}

Lexicon synthetic_lexicon(std::size_t num_objects, std::size_t num_attributes, std::size_t block) {
  if (block < 1) throw InputError("block size must be at least 1");
  std::vector<Lexicon::SynsetRecord> synsets;
  std::vector<std::pair<std::string, std::string>> edges;
  auto add = [&](char prefix, std::size_t count) {
    for (std::size_t i = 1; i <= count; ++i) {
      std::string label = std::string(1, prefix) + std::to_string(i);
      synsets.push_back({"s_" + label, {label}});
      std::size_t leader = (i - 1) / block * block + 1;
      if (leader != i) edges.emplace_back("s_" + label, "s_" + std::string(1, prefix) + std::to_string(leader));
    }
  };
  add('g', num_objects);
  add('m', num_attributes);
  return Lexicon(std::move(synsets), std::move(edges));
}

void write_records_csv(std::span<const BenchRecord> records, std::ostream& out) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.pipeline) << ',' << r.objects << ',' << r.attributes << ','
        << format_double(r.density) << ',' << r.seed << ',' << format_double(r.reduce_ms) << ',';
    if (r.capped) {
      out << kCapped << ',' << kCapped << ',' << r.concepts << ',' << kCapped << '\n';
    } else {
      out << format_double(r.build_ms) << ',' << format_double(r.total_ms) << ',' << r.concepts
          << ',' << r.edges << '\n';
    }
  }
}

std::vector<BenchRecord> parse_records_csv(std::istream& in) {
  std::vector<BenchRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kRecordsHeader) throw ParseError("unexpected records header", lineno);
      header = true;
      continue;
    }
    auto f = split_commas(line);
    if (f.size() != 10) throw ParseError("expected 10 fields", lineno);
    BenchRecord r;
    try {
      r.pipeline = parse_pipeline(f[0]);
    } catch (const InputError& e) {
      throw ParseError(e.what(), lineno);
    }
    r.objects = parse_number<std::size_t>(f[1], lineno, "objects");
    r.attributes = parse_number<std::size_t>(f[2], lineno, "attributes");
    r.density = parse_number<double>(f[3], lineno, "density");
    r.seed = parse_number<std::uint64_t>(f[4], lineno, "seed");
    r.reduce_ms = parse_number<double>(f[5], lineno, "reduce_ms");
    r.capped = f[6] == kCapped;
    if (r.capped != (f[7] == kCapped) || r.capped != (f[9] == kCapped)) {
      throw ParseError("inconsistent capped marker", lineno);
    }
    r.concepts = parse_number<std::size_t>(f[8], lineno, "concepts");
    if (!r.capped) {
      r.build_ms = parse_number<double>(f[6], lineno, "build_ms");
      r.total_ms = parse_number<double>(f[7], lineno, "total_ms");
      r.edges = parse_number<std::size_t>(f[9], lineno, "edges");
    }
    out.push_back(r);
  }
  return out;
}

SignificanceRow significance_test(std::span<const BenchRecord> records, Pipeline a, Pipeline b) {
  std::map<CellKey, const BenchRecord*> side_a, side_b;
  for (const auto& r : records) {
    if (r.pipeline == a) side_a[key_of(r)] = &r;
    if (r.pipeline == b) side_b[key_of(r)] = &r;
  }
  const std::string name = std::string(to_string(a)) + " vs " + std::string(to_string(b));
  if (side_a.size() != side_b.size()) throw InputError(name + ": unmatched cells");
  std::vector<double> xs, ys;
  for (const auto& [key, ra] : side_a) {
    auto it = side_b.find(key);
    if (it == side_b.end()) throw InputError(name + ": unmatched cells");
    if (ra->capped || it->second->capped) continue;
    xs.push_back(ra->total_ms);
    ys.push_back(it->second->total_ms);
  }
  if (xs.size() < 2) throw InputError(name + ": fewer than two uncapped paired cells");
  SignificanceRow row;
  row.a = a;
  row.b = b;
  row.metric = "total_ms";
  row.test = paired_t_test(xs, ys);
  row.significant = row.test.p < 0.05;
  return row;
}

std::vector<SignificanceRow> significance_report(std::span<const BenchRecord> records) {
  std::vector<Pipeline> present;
  for (Pipeline p : kPipelines) {
    if (std::any_of(records.begin(), records.end(),
                    [&](const BenchRecord& r) { return r.pipeline == p; })) {
      present.push_back(p);
    }
  }
  std::vector<SignificanceRow> rows;
  for (std::size_t i = 0; i < present.size(); ++i) {
    for (std::size_t j = i + 1; j < present.size(); ++j) {
      rows.push_back(significance_test(records, present[i], present[j]));
    }
  }
  return rows;
}

void write_significance_csv(std::span<const SignificanceRow> rows, std::ostream& out) {
  out << "comparison,metric,t,df,p_value,significant\n";
  for (const auto& r : rows) {
    out << to_string(r.a) << " vs " << to_string(r.b) << ',' << r.metric << ','
        << format_double(r.test.t) << ',' << r.test.df << ',' << format_double(r.test.p) << ','
        << (r.significant ? "yes" : "no") << '\n';
  }
}

std::string significance_table(std::span<const SignificanceRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(34) << "comparison" << std::setw(10) << "metric" << std::right
      << std::setw(12) << "t" << std::setw(6) << "df" << std::setw(14) << "p_value"
      << "  significant\n";
  for (const auto& r : rows) {
    std::string name = std::string(to_string(r.a)) + " vs " + std::string(to_string(r.b));
    out << std::left << std::setw(34) << name << std::setw(10) << r.metric << std::right
        << std::fixed << std::setprecision(4) << std::setw(12) << r.test.t << std::setw(6)
        << r.test.df << std::scientific << std::setprecision(4) << std::setw(14) << r.test.p
        << "  " << (r.significant ? "yes" : "no") << '\n';
    out.unsetf(std::ios::floatfield);
  }
  return out.str();
}

}  // namespace fcr
