#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fcr/analysis.hpp"
#include "fcr/bench.hpp"
#include "fcr/context.hpp"
#include "fcr/corpus.hpp"
#include "fcr/error.hpp"
#include "fcr/lattice.hpp"
#include "fcr/lexicon.hpp"
#include "fcr/reduce.hpp"
#include "fcr/stats.hpp"

namespace {

using fcr::InputError;

bool is_stdio(const std::string& path) { return path.empty() || path == "-"; }

fcr::FormalContext load_context(const std::string& path) {
  if (is_stdio(path)) return fcr::parse_cxt(std::cin);
  return fcr::read_context(path, fcr::format_for_path(path));
}

std::string context_text(const fcr::FormalContext& ctx, const std::string& path) {
  std::ostringstream out;
  if (!is_stdio(path) && fcr::format_for_path(path) == fcr::ContextFormat::csv) {
    fcr::write_csv(ctx, out);
  } else {
    fcr::write_cxt(ctx, out);
  }
  return out.str();
}

void emit(const std::string& path, const std::string& text) {
  if (is_stdio(path)) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

fcr::LexiconFormat lexicon_format(const std::string& name) {
  if (name == "tsv") return fcr::LexiconFormat::tsv;
  if (name == "wordnet") return fcr::LexiconFormat::wordnet_dict;
  throw InputError("unknown lexicon format '" + name + "'");
}

fcr::LatticeAlgorithm lattice_algorithm(const std::string& name) {
  if (name == "nextclosure") return fcr::LatticeAlgorithm::nextclosure;
  if (name == "addintent") return fcr::LatticeAlgorithm::addintent;
  throw InputError("unknown algorithm '" + name + "'");
}

bool is_json_path(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json";
}

std::string invariants_table(const fcr::LatticeInvariants& inv) {
  std::ostringstream out;
  out << "concepts  " << inv.concept_count << '\n'
      << "edges     " << inv.edge_count << '\n'
      << "height    " << inv.height << '\n'
      << "width     [" << inv.width_lo << ", " << inv.width_hi << "]\n";
  return out.str();
}

struct ReduceFlags {
  std::string method = "wn-then-freq";
  std::string lexicon;
  std::string lexicon_format = "tsv";
  std::size_t hyper_depth = 4;
  std::size_t hypo_depth = 4;
  double threshold = 0.20;
  std::string strategy = "multidisciplinary";
};

void add_reduction_flags(CLI::App* cmd, ReduceFlags& f, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", f.method,
                    "wordnet | frequency | wn-then-freq | freq-then-wn")
        ->capture_default_str();
  }
  cmd->add_option("--lexicon", f.lexicon,
                  "lexicon file (tsv) or WordNet dict directory (wordnet)");
  cmd->add_option("--lexicon-format", f.lexicon_format, "tsv | wordnet")->capture_default_str();
  cmd->add_option("--hyper-depth", f.hyper_depth, "hypernym search depth")->capture_default_str();
  cmd->add_option("--hypo-depth", f.hypo_depth, "hyponym search depth")->capture_default_str();
  cmd->add_option("--threshold", f.threshold,
                  "frequency threshold as a decimal in [0,1]; kept iff frequency > threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--strategy", f.strategy, "single-dual | multidisciplinary")
      ->capture_default_str();
}

fcr::ReductionParams reduction_params(const ReduceFlags& f) {
  fcr::ReductionParams p;
  p.hyper_depth = f.hyper_depth;
  p.hypo_depth = f.hypo_depth;
  p.threshold = f.threshold;
  p.strategy = fcr::parse_strategy(f.strategy);
  return p;
}

std::shared_ptr<const fcr::Lexicon> maybe_lexicon(const ReduceFlags& f, bool required) {
  if (f.lexicon.empty()) {
    if (required) throw InputError("--lexicon is required for this method");
    return std::make_shared<const fcr::Lexicon>();
  }
  return std::make_shared<const fcr::Lexicon>(
      fcr::load_lexicon(f.lexicon, lexicon_format(f.lexicon_format)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Formal concept lattices with lexical and frequency-based context reduction.\n"
      "Contexts are Burmeister .cxt files (or .csv by extension); '-' means stdin/stdout.\n"
      "All thresholds are decimals in [0,1], never percentages.\n"
      "Exit codes: 0 success, 1 input error, 2 capacity limit reached."};
  app.require_subcommand(1);

  // gen
  std::size_t gen_objects = 100, gen_attributes = 16;
  double gen_density = 0.10;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "random context with Bernoulli(density) cells");
  gen->add_option("--objects", gen_objects, "number of objects")->capture_default_str();
  gen->add_option("--attributes", gen_attributes, "number of attributes")->capture_default_str();
  gen->add_option("--density", gen_density, "fill probability in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "output context (default stdout)");

  // pairs2ctx
  std::string pairs_in, pairs_out;
  double pairs_threshold = 0.0;
  auto* pairs = app.add_subcommand(
      "pairs2ctx", "pair TSV (head<TAB>verb#role<TAB>count) to a context weighted by P(head|predicate)");
  pairs->add_option("input", pairs_in, "pair TSV")->required();
  pairs->add_option("--threshold", pairs_threshold,
                    "weight threshold in [0,1]; a cell is set iff weight > threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  pairs->add_option("-o,--output", pairs_out, "output context (default stdout)");

  // reduce
  std::string red_in, red_out, red_trace;
  ReduceFlags red_flags;
  auto* red = app.add_subcommand("reduce", "reduce a context; optionally write the merge trace");
  red->add_option("input", red_in, "input context ('-' for stdin)")->required();
  add_reduction_flags(red, red_flags, true);
  red->add_option("-o,--output", red_out, "reduced context (default stdout)");
  red->add_option("--trace-out", red_trace, "write the merge/removal trace as JSON");

  // lattice
  std::string lat_in, lat_dot, lat_json, lat_algorithm = "addintent", lat_labels = "reduced";
  std::size_t lat_cap = fcr::LatticeOptions{}.concept_cap;
  auto* lat = app.add_subcommand("lattice", "build the concept lattice; DOT to stdout by default");
  lat->add_option("input", lat_in, "input context ('-' for stdin)")->required();
  lat->add_option("--algorithm", lat_algorithm, "nextclosure | addintent")->capture_default_str();
  lat->add_option("--dot", lat_dot, "write Graphviz DOT ('-' for stdout)");
  lat->add_option("--json", lat_json, "write lattice JSON ('-' for stdout)");
  lat->add_option("--labels", lat_labels, "DOT labels: full | reduced")->capture_default_str();
  lat->add_option("--concept-cap", lat_cap, "abort (exit 2) beyond this many concepts")
      ->capture_default_str();

  // invariants
  std::string inv_in, inv_format = "json", inv_algorithm = "addintent", inv_out;
  auto* inv = app.add_subcommand("invariants", "concept count, edges, height and width bounds");
  inv->add_option("input", inv_in, "context file, or lattice .json from `lattice --json`")
      ->required();
  inv->add_option("--format", inv_format, "json | table")->capture_default_str();
  inv->add_option("--algorithm", inv_algorithm, "builder for context input")
      ->capture_default_str();
  inv->add_option("-o,--output", inv_out, "output file (default stdout)");

  // compare
  std::string cmp_a, cmp_b, cmp_trace, cmp_format = "table", cmp_out,
                                        cmp_algorithm = "addintent";
  std::size_t cmp_max_nodes = fcr::IsomorphismOptions{}.max_nodes;
  auto* cmp = app.add_subcommand("compare", "compare the lattices of an original and a reduced context");
  cmp->add_option("original", cmp_a, "original context")->required();
  cmp->add_option("reduced", cmp_b, "reduced context")->required();
  cmp->add_option("--trace", cmp_trace, "trace JSON from `reduce --trace-out` (default identity)");
  cmp->add_option("--format", cmp_format, "json | table")->capture_default_str();
  cmp->add_option("--algorithm", cmp_algorithm, "nextclosure | addintent")->capture_default_str();
  cmp->add_option("--max-nodes", cmp_max_nodes, "isomorphism search bound (exit 2 beyond)")
      ->capture_default_str();
  cmp->add_option("-o,--output", cmp_out, "output file (default stdout)");

  // bench
  fcr::BenchConfig bench_cfg;
  ReduceFlags bench_flags;
  std::string bench_config_file, bench_out, bench_sig, bench_pipelines_text;
  std::vector<std::string> bench_pipelines;
  std::size_t bench_synthetic = 0;
  bool bench_no_warmup = false, bench_table = false;
  auto* bench = app.add_subcommand("bench", "timing sweep over seeded random contexts");
  bench->add_option("--config", bench_config_file,
                    "JSON object with any of: objects, sweep, densities, density_caps "
                    "([[density, max_attributes], ...]), repeats, seed, pipelines, threshold, "
                    "hyper_depth, hypo_depth, strategy, threads, concept_cap; flags override it");
  bench->add_option("--objects", bench_cfg.num_objects, "objects per context")
      ->capture_default_str();
  bench->add_option("--sweep", bench_cfg.attribute_sweep, "attribute counts")->delimiter(',');
  bench->add_option("--densities", bench_cfg.densities, "densities in [0,1]")->delimiter(',');
  bench->add_option("--repeats", bench_cfg.repeats, "repeats per cell")->capture_default_str();
  bench->add_option("--seed", bench_cfg.seed, "master seed")->capture_default_str();
  bench->add_option("--pipelines", bench_pipelines,
                    "raw_nextclosure,raw_addintent,wn_only,freq_only,wn_then_freq,freq_then_wn")
      ->delimiter(',');
  add_reduction_flags(bench, bench_flags, false);
  bench->add_option("--synthetic-lexicon", bench_synthetic,
                    "instead of --lexicon: group every N consecutive labels under the first");
  bench->add_option("--threads", bench_cfg.threads, "worker threads over cells")
      ->capture_default_str();
  bench->add_option("--concept-cap", bench_cfg.concept_cap, "cells beyond this are marked capped")
      ->capture_default_str();
  bench->add_flag("--no-warmup", bench_no_warmup, "skip the untimed warm-up run");
  bench->add_option("-o,--output", bench_out, "records CSV (default stdout)");
  bench->add_option("--significance", bench_sig, "write paired t-test CSV");
  bench->add_flag("--table", bench_table, "print the significance table to stderr");

  // samplesize
  std::size_t ss_population = 0;
  double ss_confidence = 0.95, ss_margin = 0.05, ss_proportion = 0.5;
  auto* ss = app.add_subcommand("samplesize", "Cochran sample size with finite-population correction");
  ss->add_option("population", ss_population, "population size")->required();
  ss->add_option("confidence", ss_confidence, "confidence level in (0,1)")->required();
  ss->add_option("margin", ss_margin, "error margin in (0,1)")->required();
  ss->add_option("proportion", ss_proportion, "expected proportion in [0,1]")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      emit(gen_out, context_text(fcr::random_context(gen_objects, gen_attributes, gen_density,
                                                     gen_seed),
                                 gen_out));
    } else if (pairs->parsed()) {
      auto collection = fcr::load_pairs(pairs_in);
      auto ctx = fcr::build_context(fcr::weigh_pairs(collection), pairs_threshold);
      emit(pairs_out, context_text(ctx, pairs_out));
    } else if (red->parsed()) {
      auto method = fcr::parse_method(red_flags.method);
      auto params = reduction_params(red_flags);
      auto lex = maybe_lexicon(red_flags, method != fcr::ReductionMethod::frequency);
      auto ctx = load_context(red_in);
      auto result = fcr::reduce(ctx, *lex, params, method);
      std::string text = context_text(result.context, red_out);
      std::string trace = fcr::trace_to_json(result.trace).dump(2) + "\n";
      emit(red_out, text);
      if (!red_trace.empty()) emit(red_trace, trace);
    } else if (lat->parsed()) {
      auto algorithm = lattice_algorithm(lat_algorithm);
      fcr::Labeling labeling;
      if (lat_labels == "full") {
        labeling = fcr::Labeling::full;
      } else if (lat_labels == "reduced") {
        labeling = fcr::Labeling::reduced;
      } else {
        throw InputError("unknown labeling '" + lat_labels + "'");
      }
      if (!lat_dot.empty() && !lat_json.empty() && is_stdio(lat_dot) && is_stdio(lat_json)) {
        throw InputError("--dot and --json cannot both go to stdout");
      }
      auto ctx = load_context(lat_in);
      auto lattice = fcr::build_lattice(ctx, algorithm, {lat_cap});
      if (lat_dot.empty() && lat_json.empty()) lat_dot = "-";
      if (!lat_dot.empty()) emit(lat_dot, fcr::export_dot(lattice, labeling));
      if (!lat_json.empty()) emit(lat_json, fcr::lattice_to_json(lattice).dump(2) + "\n");
    } else if (inv->parsed()) {
      if (inv_format != "json" && inv_format != "table") {
        throw InputError("unknown format '" + inv_format + "'");
      }
      auto algorithm = lattice_algorithm(inv_algorithm);
      fcr::ConceptLattice lattice =
          is_json_path(inv_in) ? fcr::lattice_from_json(read_json(inv_in))
                               : fcr::build_lattice(load_context(inv_in), algorithm);
      auto result = fcr::invariants(lattice);
      emit(inv_out, inv_format == "json" ? fcr::invariants_to_json(result).dump() + "\n"
                                         : invariants_table(result));
    } else if (cmp->parsed()) {
      if (cmp_format != "json" && cmp_format != "table") {
        throw InputError("unknown format '" + cmp_format + "'");
      }
      auto algorithm = lattice_algorithm(cmp_algorithm);
      fcr::MergeTrace trace;
      if (!cmp_trace.empty()) trace = fcr::trace_from_json(read_json(cmp_trace));
      auto ctx_a = load_context(cmp_a);
      auto ctx_b = load_context(cmp_b);
      auto la = fcr::build_lattice(ctx_a, algorithm);
      auto lb = fcr::build_lattice(ctx_b, algorithm);
      auto report = fcr::compare(la, lb, ctx_b, trace, {cmp_max_nodes});
      emit(cmp_out, cmp_format == "json" ? fcr::report_to_json(report).dump(2) + "\n"
                                         : fcr::report_table(report));
    } else if (bench->parsed()) {
      if (!bench_config_file.empty()) {
        auto doc = read_json(bench_config_file);
        try {
          auto set_if_unset = [&](const char* key, const char* flag, auto& target) {
            if (doc.contains(key) && bench->count(flag) == 0) {
              doc.at(key).get_to(target);
            }
          };
          set_if_unset("objects", "--objects", bench_cfg.num_objects);
          set_if_unset("sweep", "--sweep", bench_cfg.attribute_sweep);
          set_if_unset("densities", "--densities", bench_cfg.densities);
          set_if_unset("repeats", "--repeats", bench_cfg.repeats);
          set_if_unset("seed", "--seed", bench_cfg.seed);
          set_if_unset("pipelines", "--pipelines", bench_pipelines);
          set_if_unset("threshold", "--threshold", bench_flags.threshold);
          set_if_unset("hyper_depth", "--hyper-depth", bench_flags.hyper_depth);
          set_if_unset("hypo_depth", "--hypo-depth", bench_flags.hypo_depth);
          set_if_unset("strategy", "--strategy", bench_flags.strategy);
          set_if_unset("threads", "--threads", bench_cfg.threads);
          set_if_unset("concept_cap", "--concept-cap", bench_cfg.concept_cap);
          if (doc.contains("density_caps")) doc.at("density_caps").get_to(bench_cfg.density_caps);
        } catch (const nlohmann::json::exception& e) {
          throw InputError("bench config: " + std::string(e.what()));
        }
      }
      if (!bench_pipelines.empty()) {
        bench_cfg.pipelines.clear();
        for (const auto& name : bench_pipelines) {
          bench_cfg.pipelines.push_back(fcr::parse_pipeline(name));
        }
      }
      bench_cfg.params = reduction_params(bench_flags);
      bench_cfg.warmup = !bench_no_warmup;
      if (bench_synthetic > 0 && !bench_flags.lexicon.empty()) {
        throw InputError("--lexicon and --synthetic-lexicon are exclusive");
      }
      std::size_t max_attributes = 0;
      for (std::size_t m : bench_cfg.attribute_sweep) max_attributes = std::max(max_attributes, m);
      if (bench_synthetic > 0) {
        bench_cfg.lexicon = std::make_shared<const fcr::Lexicon>(
            fcr::synthetic_lexicon(bench_cfg.num_objects, max_attributes, bench_synthetic));
      } else if (!bench_flags.lexicon.empty()) {
        bench_cfg.lexicon = maybe_lexicon(bench_flags, true);
      }
      bench_cfg.validate();
      auto records = fcr::run_benchmark(bench_cfg);
      std::ostringstream csv;
      fcr::write_records_csv(records, csv);
      std::string sig_text, table;
      if (!bench_sig.empty() || bench_table) {
        auto rows = fcr::significance_report(records);
        std::ostringstream sig;
        fcr::write_significance_csv(rows, sig);
        sig_text = sig.str();
        table = fcr::significance_table(rows);
      }
      emit(bench_out, csv.str());
      if (!bench_sig.empty()) emit(bench_sig, sig_text);
      if (bench_table) std::cerr << table;
    } else if (ss->parsed()) {
      std::cout << fcr::cochran_sample_size(ss_population, ss_confidence, ss_margin,
                                            ss_proportion)
                << '\n';
    }
  } catch (const fcr::CapacityError& e) {
    std::cerr << "capacity limit: " << e.what() << " (reached " << e.reached() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
