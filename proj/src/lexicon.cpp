#include "fcr/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "fcr/error.hpp"

namespace fcr {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::none: return "none";
    case Relation::b_generalizes_a: return "b-generalizes-a";
    case Relation::a_generalizes_b: return "a-generalizes-b";
    case Relation::synonym: return "synonym";
  }
  return "none";
}

std::string normalize_lemma(std::string_view lemma) {
  std::string out;
  out.reserve(lemma.size());
  bool pending_space = false;
  for (char raw : lemma) {
    char c = raw == '_' ? ' ' : raw;
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

Lexicon::Lexicon(std::vector<SynsetRecord> synsets,
                 std::vector<std::pair<std::string, std::string>> hypernym_edges) {
  std::unordered_map<std::string, std::size_t> index;
  for (auto& record : synsets) {
    auto [it, inserted] = index.emplace(record.id, ids_.size());
    if (!inserted) throw InputError("duplicate synset id '" + record.id + "'");
    std::vector<std::string> lemmas;
    for (const auto& lemma : record.lemmas) {
      std::string norm = normalize_lemma(lemma);
      if (norm.empty()) throw InputError("empty lemma in synset '" + record.id + "'");
      if (std::find(lemmas.begin(), lemmas.end(), norm) == lemmas.end()) lemmas.push_back(norm);
    }
    for (const auto& lemma : lemmas) lemma_index_[lemma].push_back(ids_.size());
    ids_.push_back(std::move(record.id));
    lemmas_.push_back(std::move(lemmas));
  }
  hypernyms_.resize(ids_.size());
  for (const auto& [child, parent] : hypernym_edges) {
    auto c = index.find(child);
    auto p = index.find(parent);
    if (c == index.end() || p == index.end()) {
      throw InputError("hypernym edge " + child + " -> " + parent +
                       " references an unknown synset");
    }
    auto& parents = hypernyms_[c->second];
    if (std::find(parents.begin(), parents.end(), p->second) == parents.end()) {
      parents.push_back(p->second);
    }
  }

  // Cycle detection: iterative DFS with colors; report the first cycle found.
  enum Color : unsigned char { white, grey, black };
  std::vector<Color> color(ids_.size(), white);
  for (std::size_t start = 0; start < ids_.size(); ++start) {
    if (color[start] != white) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    color[start] = grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == hypernyms_[node].size()) {
        color[node] = black;
        stack.pop_back();
        continue;
      }
      std::size_t parent = hypernyms_[node][next++];
      if (color[parent] == grey) {
        std::string cycle;
        bool in_cycle = false;
        for (const auto& frame : stack) {
          if (frame.first == parent) in_cycle = true;
          if (in_cycle) cycle += ids_[frame.first] + " -> ";
        }
        throw InputError("hypernym cycle: " + cycle + ids_[parent]);
      }
      if (color[parent] == white) {
        color[parent] = grey;
        stack.emplace_back(parent, 0);
      }
    }
  }
}

std::size_t Lexicon::hypernym_edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& parents : hypernyms_) n += parents.size();
  return n;
}

const std::vector<std::size_t>* Lexicon::senses(const std::string& normalized) const {
  auto it = lemma_index_.find(normalized);
  return it == lemma_index_.end() ? nullptr : &it->second;
}

std::vector<std::string> Lexicon::synsets_of(std::string_view lemma) const {
  std::vector<std::string> out;
  if (const auto* s = senses(normalize_lemma(lemma))) {
    for (std::size_t i : *s) out.push_back(ids_[i]);
  }
  return out;
}

bool Lexicon::are_synonyms(std::string_view a, std::string_view b) const {
  return related(term(a), term(b), 0, 0) == Relation::synonym;
}

bool Lexicon::reaches(const std::vector<std::size_t>& from,
                      const std::vector<std::size_t>& targets, std::size_t depth) const {
  std::unordered_set<std::size_t> target_set(targets.begin(), targets.end());
  std::unordered_set<std::size_t> seen(from.begin(), from.end());
  std::vector<std::size_t> frontier(from.begin(), from.end());
  for (std::size_t level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<std::size_t> next;
    for (std::size_t s : frontier) {
      for (std::size_t p : hypernyms_[s]) {
        if (target_set.count(p)) return true;
        if (seen.insert(p).second) next.push_back(p);
      }
    }
    frontier = std::move(next);
  }
  return false;
}

Lexicon::Term Lexicon::term(std::string_view lemma) const {
  Term t{normalize_lemma(lemma), nullptr};
  t.senses = senses(t.normalized);
  return t;
}

Relation Lexicon::related(const Term& a, const Term& b, std::size_t hyper_depth,
                          std::size_t hypo_depth) const {
  if (a.normalized == b.normalized) return Relation::synonym;
  if (!a.senses || !b.senses) return Relation::none;
  for (std::size_t x : *a.senses) {
    if (std::find(b.senses->begin(), b.senses->end(), x) != b.senses->end()) {
      return Relation::synonym;
    }
  }
  if (reaches(*a.senses, *b.senses, hyper_depth)) return Relation::b_generalizes_a;
  if (reaches(*b.senses, *a.senses, hypo_depth)) return Relation::a_generalizes_b;
  return Relation::none;
}

Relation Lexicon::related(std::string_view a, std::string_view b, std::size_t hyper_depth,
                          std::size_t hypo_depth) const {
  return related(term(a), term(b), hyper_depth, hypo_depth);
}

std::string most_generic(std::string_view a, std::string_view b, Relation relation) {
  switch (relation) {
    case Relation::none:
      throw InputError("most_generic needs related terms");
    case Relation::b_generalizes_a:
      return std::string(b);
    case Relation::a_generalizes_b:
      return std::string(a);
    case Relation::synonym: {
      std::set<std::string> parts;
      for (auto& p : split(a, '/')) parts.insert(std::move(p));
      for (auto& p : split(b, '/')) parts.insert(std::move(p));
      std::string out;
      for (const auto& p : parts) {
        if (!out.empty()) out += '/';
        out += p;
      }
      return out;
    }
  }
  return {};
}

Lexicon parse_lexicon_tsv(std::istream& in) {
  std::vector<Lexicon::SynsetRecord> synsets;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", line_no);
    if (fields[0] == "S") {
      if (fields[1].empty()) throw ParseError("empty synset id", line_no);
      auto lemmas = split(fields[2], '|');
      for (const auto& l : lemmas) {
        if (normalize_lemma(l).empty()) throw ParseError("empty lemma", line_no);
      }
      synsets.push_back({fields[1], std::move(lemmas)});
    } else if (fields[0] == "H") {
      edges.emplace_back(fields[1], fields[2]);
    } else {
      throw ParseError("unknown record kind '" + fields[0] + "'", line_no);
    }
  }
  return Lexicon(std::move(synsets), std::move(edges));
}

void write_lexicon_tsv(const std::vector<Lexicon::SynsetRecord>& synsets,
                       const std::vector<std::pair<std::string, std::string>>& edges,
                       std::ostream& out) {
  for (const auto& s : synsets) {
    out << "S\t" << s.id << '\t';
    for (std::size_t i = 0; i < s.lemmas.size(); ++i) out << (i ? "|" : "") << s.lemmas[i];
    out << '\n';
  }
  for (const auto& [child, parent] : edges) out << "H\t" << child << '\t' << parent << '\n';
}

Lexicon import_wordnet_dict(const std::filesystem::path& dir) {
  std::ifstream data(dir / "data.noun");
  if (!data) throw InputError("cannot open " + (dir / "data.noun").string());
  std::ifstream index(dir / "index.noun");
  if (!index) throw InputError("cannot open " + (dir / "index.noun").string());

  std::vector<Lexicon::SynsetRecord> synsets;
  std::unordered_map<std::string, std::size_t> by_offset;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(data, line)) {
    ++line_no;
    if (line.empty() || line.front() == ' ') continue;  // license header
    std::string body = line.substr(0, line.find(" | "));
    auto w = split_words(body);
    // offset lex_filenum ss_type w_cnt(hex) {word lex_id}... p_cnt {sym offset pos st}...
    if (w.size() < 4) throw ParseError("truncated synset record", line_no);
    std::size_t pos = 3;
    std::size_t word_count = 0;
    try {
      word_count = std::stoul(w[pos++], nullptr, 16);
    } catch (const std::exception&) {
      throw ParseError("bad word count", line_no);
    }
    if (w.size() < pos + 2 * word_count + 1) throw ParseError("truncated word list", line_no);
    Lexicon::SynsetRecord record{w[0], {}};
    for (std::size_t k = 0; k < word_count; ++k, pos += 2) record.lemmas.push_back(w[pos]);
    std::size_t pointer_count = 0;
    try {
      pointer_count = std::stoul(w[pos++]);
    } catch (const std::exception&) {
      throw ParseError("bad pointer count", line_no);
    }
    if (w.size() < pos + 4 * pointer_count) throw ParseError("truncated pointer list", line_no);
    for (std::size_t k = 0; k < pointer_count; ++k, pos += 4) {
      if (w[pos] == "@" && w[pos + 2] == "n") edges.emplace_back(w[0], w[pos + 1]);
    }
    by_offset.emplace(w[0], synsets.size());
    synsets.push_back(std::move(record));
  }

  line_no = 0;
  while (std::getline(index, line)) {
    ++line_no;
    if (line.empty() || line.front() == ' ') continue;
    auto w = split_words(line);
    // lemma pos synset_cnt p_cnt {ptr}... sense_cnt tagsense_cnt {offset}...
    if (w.size() < 4) throw ParseError("truncated index record", line_no);
    std::size_t synset_count = 0, pointer_count = 0;
    try {
      synset_count = std::stoul(w[2]);
      pointer_count = std::stoul(w[3]);
    } catch (const std::exception&) {
      throw ParseError("bad counts in index record", line_no);
    }
    std::size_t first_offset = 4 + pointer_count + 2;
    if (w.size() < first_offset + synset_count) throw ParseError("truncated offsets", line_no);
    std::string lemma = normalize_lemma(w[0]);
    for (std::size_t k = 0; k < synset_count; ++k) {
      auto it = by_offset.find(w[first_offset + k]);
      if (it == by_offset.end()) {
        throw ParseError("index references unknown synset " + w[first_offset + k], line_no);
      }
      auto& lemmas = synsets[it->second].lemmas;
      bool present = std::any_of(lemmas.begin(), lemmas.end(),
                                 [&](const std::string& l) { return normalize_lemma(l) == lemma; });
      if (!present) lemmas.push_back(lemma);
    }
  }
  return Lexicon(std::move(synsets), std::move(edges));
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconFormat format) {
  if (format == LexiconFormat::wordnet_dict) return import_wordnet_dict(path);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_lexicon_tsv(in);
}

}  // namespace fcr
