#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fcr {

/// How two terms relate lexically, from the point of view of the pair (a, b).
enum class Relation { none, b_generalizes_a, a_generalizes_b, synonym };

std::string_view to_string(Relation r);

/// Lower-cases ASCII, maps '_' to a space, trims and collapses whitespace runs.
std::string normalize_lemma(std::string_view lemma);

/// Synsets with directed hypernym edges. Immutable after construction.
class Lexicon {
 public:
  struct SynsetRecord {
    std::string id;
    std::vector<std::string> lemmas;
  };

  Lexicon() = default;

  /// Validates references and acyclicity; throws InputError (ParseError
  /// subclasses come from the file loaders).
  Lexicon(std::vector<SynsetRecord> synsets,
          std::vector<std::pair<std::string, std::string>> hypernym_edges);

  std::size_t synset_count() const noexcept { return ids_.size(); }
  std::size_t hypernym_edge_count() const noexcept;
  bool empty() const noexcept { return ids_.empty(); }

  /// Synset ids containing the lemma (after normalization).
  std::vector<std::string> synsets_of(std::string_view lemma) const;

  /// Same lemma after normalization, or some synset holds both.
  bool are_synonyms(std::string_view a, std::string_view b) const;

  /// Synonymy first; then whether b is reachable upward from a within
  /// `hyper_depth` edges; then whether a is reachable upward from b within
  /// `hypo_depth` edges. Any sense pair counts.
  Relation related(std::string_view a, std::string_view b, std::size_t hyper_depth,
                   std::size_t hypo_depth) const;

  /// A lemma resolved once for repeated queries. Valid while the lexicon lives.
  struct Term {
    std::string normalized;
    const std::vector<std::size_t>* senses = nullptr;
  };
  Term term(std::string_view lemma) const;
  Relation related(const Term& a, const Term& b, std::size_t hyper_depth,
                   std::size_t hypo_depth) const;

 private:
  const std::vector<std::size_t>* senses(const std::string& normalized) const;
  bool reaches(const std::vector<std::size_t>& from, const std::vector<std::size_t>& targets,
               std::size_t depth) const;

  std::vector<std::string> ids_;
  std::vector<std::vector<std::string>> lemmas_;
  std::vector<std::vector<std::size_t>> hypernyms_;
  std::unordered_map<std::string, std::vector<std::size_t>> lemma_index_;
};

/// More general of the two labels, or for synonyms the '/'-joined union of
/// their components in lexicographic order. Throws InputError for none.
std::string most_generic(std::string_view a, std::string_view b, Relation relation);

enum class LexiconFormat { tsv, wordnet_dict };

/// `S<TAB>id<TAB>lemma|lemma...` and `H<TAB>child<TAB>parent`; '#' comments.
Lexicon parse_lexicon_tsv(std::istream& in);

/// Princeton WordNet `index.noun` + `data.noun` in `dir`; '@' pointers only.
Lexicon import_wordnet_dict(const std::filesystem::path& dir);

Lexicon load_lexicon(const std::filesystem::path& path, LexiconFormat format);

void write_lexicon_tsv(const std::vector<Lexicon::SynsetRecord>& synsets,
                       const std::vector<std::pair<std::string, std::string>>& edges,
                       std::ostream& out);

}  // namespace fcr
