#include "fcr/context.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "fcr/error.hpp"

namespace fcr {

namespace {

void require_unique(const std::vector<std::string>& labels, const char* kind) {
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw InputError(std::string("duplicate ") + kind + " label '" + label + "'");
    }
  }
}

std::optional<std::size_t> find_label(const std::vector<std::string>& labels,
                                      std::string_view label) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

BitSet checked_set(std::size_t universe, std::span<const std::size_t> indices,
                   const char* kind) {
  BitSet s(universe);
  for (std::size_t i : indices) {
    if (i >= universe) {
      throw InputError(std::string(kind) + " index " + std::to_string(i) +
                       " out of range (size " + std::to_string(universe) + ")");
    }
    s.set(i);
  }
  return s;
}

void require_universe(const BitSet& s, std::size_t universe, const char* kind) {
  if (s.size() != universe) {
    throw InputError(std::string(kind) + " set has universe " + std::to_string(s.size()) +
                     ", expected " + std::to_string(universe));
  }
}

// Line reader that tracks 1-based line numbers and strips '\r'.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what,
                                      line_no_ + 1);
    return line;
  }

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(const std::string& text, std::size_t line) {
  if (text.empty()) throw ParseError("expected a decimal count", line);
  std::size_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("expected a decimal count, got '" + text + "'", line);
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  cells.push_back(std::move(cell));
  return cells;
}

void write_csv_cell(std::ostream& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) {
    out << cell;
    return;
  }
  out << '"';
  for (char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

FormalContext::FormalContext(std::vector<std::string> objects,
                             std::vector<std::string> attributes, std::vector<BitSet> rows)
    : objects_(std::move(objects)), attributes_(std::move(attributes)), rows_(std::move(rows)) {
  require_unique(objects_, "object");
  require_unique(attributes_, "attribute");
  if (rows_.size() != objects_.size()) {
    throw InputError("incidence has " + std::to_string(rows_.size()) + " rows for " +
                     std::to_string(objects_.size()) + " objects");
  }
  for (const auto& r : rows_) {
    if (r.size() != attributes_.size()) {
      throw InputError("incidence row width " + std::to_string(r.size()) + " does not match " +
                       std::to_string(attributes_.size()) + " attributes");
    }
  }
  columns_.assign(attributes_.size(), BitSet(objects_.size()));
  for (std::size_t g = 0; g < rows_.size(); ++g) {
    rows_[g].for_each([&](std::size_t m) { columns_[m].set(g); });
  }
}

FormalContext FormalContext::from_table(std::vector<std::string> objects,
                                        std::vector<std::string> attributes,
                                        const std::vector<std::vector<int>>& table) {
  std::vector<BitSet> rows;
  rows.reserve(table.size());
  for (const auto& values : table) {
    if (values.size() != attributes.size()) {
      throw InputError("table row width does not match attribute count");
    }
    BitSet r(attributes.size());
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (values[m]) r.set(m);
    }
    rows.push_back(std::move(r));
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

std::optional<std::size_t> FormalContext::object_index(std::string_view label) const {
  return find_label(objects_, label);
}

std::optional<std::size_t> FormalContext::attribute_index(std::string_view label) const {
  return find_label(attributes_, label);
}

std::size_t FormalContext::fill_count() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.count();
  return n;
}

double FormalContext::density() const noexcept {
  std::size_t cells = num_objects() * num_attributes();
  return cells == 0 ? 0.0 : static_cast<double>(fill_count()) / static_cast<double>(cells);
}

BitSet object_intent(const FormalContext& ctx, const BitSet& objects) {
  require_universe(objects, ctx.num_objects(), "object");
  BitSet intent = BitSet::full(ctx.num_attributes());
  objects.for_each([&](std::size_t g) { intent &= ctx.row(g); });
  return intent;
}

BitSet object_intent(const FormalContext& ctx, std::span<const std::size_t> objects) {
  return object_intent(ctx, checked_set(ctx.num_objects(), objects, "object"));
}

BitSet attribute_extent(const FormalContext& ctx, const BitSet& attributes) {
  require_universe(attributes, ctx.num_attributes(), "attribute");
  BitSet extent = BitSet::full(ctx.num_objects());
  attributes.for_each([&](std::size_t m) { extent &= ctx.column(m); });
  return extent;
}

BitSet attribute_extent(const FormalContext& ctx, std::span<const std::size_t> attributes) {
  return attribute_extent(ctx, checked_set(ctx.num_attributes(), attributes, "attribute"));
}

BitSet closure(const FormalContext& ctx, const BitSet& attributes) {
  return object_intent(ctx, attribute_extent(ctx, attributes));
}

BitSet closure(const FormalContext& ctx, std::span<const std::size_t> attributes) {
  return closure(ctx, checked_set(ctx.num_attributes(), attributes, "attribute"));
}

double row_frequency(const FormalContext& ctx, std::size_t object) {
  if (object >= ctx.num_objects()) throw InputError("object index out of range");
  if (ctx.num_attributes() == 0) throw InputError("row frequency undefined without attributes");
  return static_cast<double>(ctx.row(object).count()) /
         static_cast<double>(ctx.num_attributes());
}

double col_frequency(const FormalContext& ctx, std::size_t attribute) {
  if (attribute >= ctx.num_attributes()) throw InputError("attribute index out of range");
  if (ctx.num_objects() == 0) throw InputError("column frequency undefined without objects");
  return static_cast<double>(ctx.column(attribute).count()) /
         static_cast<double>(ctx.num_objects());
}

ContextFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ContextFormat::csv : ContextFormat::cxt;
}

FormalContext parse_cxt(std::istream& in) {
  LineReader reader(in);
  if (reader.expect("'B' header") != "B") throw ParseError("first line must be 'B'", 1);
  reader.expect("context name line");  // usually empty; some tools store a name here
  std::string text = reader.expect("object count");
  std::size_t num_objects = parse_count(text, reader.line_no());
  text = reader.expect("attribute count");
  std::size_t num_attributes = parse_count(text, reader.line_no());
  if (!reader.expect("blank separator line").empty()) {
    throw ParseError("expected an empty line after the counts", reader.line_no());
  }

  std::vector<std::string> objects;
  objects.reserve(num_objects);
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < num_objects; ++i) {
    objects.push_back(reader.expect("object name"));
    if (!seen.insert(objects.back()).second) {
      throw ParseError("duplicate object label '" + objects.back() + "'", reader.line_no());
    }
  }
  std::vector<std::string> attributes;
  attributes.reserve(num_attributes);
  seen.clear();
  for (std::size_t i = 0; i < num_attributes; ++i) {
    attributes.push_back(reader.expect("attribute name"));
    if (!seen.insert(attributes.back()).second) {
      throw ParseError("duplicate attribute label '" + attributes.back() + "'",
                       reader.line_no());
    }
  }

  std::vector<BitSet> rows;
  rows.reserve(num_objects);
  for (std::size_t g = 0; g < num_objects; ++g) {
    std::string line = reader.expect("incidence row");
    if (line.size() != num_attributes) {
      throw ParseError("row has " + std::to_string(line.size()) + " cells, expected " +
                           std::to_string(num_attributes),
                       reader.line_no());
    }
    BitSet r(num_attributes);
    for (std::size_t m = 0; m < line.size(); ++m) {
      if (line[m] == 'X' || line[m] == 'x') {
        r.set(m);
      } else if (line[m] != '.') {
        throw ParseError(std::string("invalid incidence character '") + line[m] + "'",
                         reader.line_no());
      }
    }
    rows.push_back(std::move(r));
  }
  std::string line;
  while (reader.next(line)) {
    if (!line.empty()) throw ParseError("unexpected content after incidence rows", reader.line_no());
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

void write_cxt(const FormalContext& ctx, std::ostream& out) {
  out << "B\n\n" << ctx.num_objects() << '\n' << ctx.num_attributes() << "\n\n";
  for (const auto& g : ctx.objects()) out << g << '\n';
  for (const auto& m : ctx.attributes()) out << m << '\n';
  std::string line(ctx.num_attributes(), '.');
  for (std::size_t g = 0; g < ctx.num_objects(); ++g) {
    for (std::size_t m = 0; m < ctx.num_attributes(); ++m) line[m] = ctx.incident(g, m) ? 'X' : '.';
    out << line << '\n';
  }
}

FormalContext parse_csv(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) return {};
  auto header = split_csv_line(line, 1);
  if (!header.front().empty()) throw ParseError("first header cell must be empty", 1);
  std::vector<std::string> attributes(header.begin() + 1, header.end());
  if (attributes.size() == 1 && attributes.front().empty()) attributes.clear();

  std::vector<std::string> objects;
  std::vector<BitSet> rows;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line, reader.line_no());
    if (cells.size() != attributes.size() + 1) {
      throw ParseError("row has " + std::to_string(cells.size() - 1) + " cells, expected " +
                           std::to_string(attributes.size()),
                       reader.line_no());
    }
    BitSet r(attributes.size());
    for (std::size_t m = 0; m < attributes.size(); ++m) {
      const auto& c = cells[m + 1];
      if (c == "1") {
        r.set(m);
      } else if (c != "0") {
        throw ParseError("cell must be 0 or 1, got '" + c + "'", reader.line_no());
      }
    }
    objects.push_back(std::move(cells.front()));
    rows.push_back(std::move(r));
  }
  try {
    return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_csv(const FormalContext& ctx, std::ostream& out) {
  for (const auto& m : ctx.attributes()) {
    out << ',';
    write_csv_cell(out, m);
  }
  out << '\n';
  for (std::size_t g = 0; g < ctx.num_objects(); ++g) {
    write_csv_cell(out, ctx.objects()[g]);
    for (std::size_t m = 0; m < ctx.num_attributes(); ++m) out << (ctx.incident(g, m) ? ",1" : ",0");
    out << '\n';
  }
}

FormalContext read_context(const std::filesystem::path& path, ContextFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return format == ContextFormat::csv ? parse_csv(in) : parse_cxt(in);
}

void write_context(const FormalContext& ctx, const std::filesystem::path& path,
                   ContextFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  if (format == ContextFormat::csv) {
    write_csv(ctx, out);
  } else {
    write_cxt(ctx, out);
  }
}

FormalContext random_context(std::size_t num_objects, std::size_t num_attributes,
                             double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw InputError("density must lie in [0, 1]");
  }
  std::mt19937_64 engine(seed);
  // 53-bit uniform in [0, 1); avoids implementation-defined distributions.
  auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };

  std::vector<std::string> objects, attributes;
  for (std::size_t g = 1; g <= num_objects; ++g) objects.push_back("g" + std::to_string(g));
  for (std::size_t m = 1; m <= num_attributes; ++m) attributes.push_back("m" + std::to_string(m));
  std::vector<BitSet> rows(num_objects, BitSet(num_attributes));
  for (auto& r : rows) {
    for (std::size_t m = 0; m < num_attributes; ++m) {
      if (uniform() < density) r.set(m);
    }
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

FormalContext subcontext(const FormalContext& ctx, const BitSet& keep_objects,
                         const BitSet& keep_attributes) {
  std::vector<std::string> objects, attributes;
  std::vector<std::size_t> cols = keep_attributes.indices();
  for (std::size_t m : cols) attributes.push_back(ctx.attributes()[m]);
  std::vector<BitSet> rows;
  keep_objects.for_each([&](std::size_t g) {
    objects.push_back(ctx.objects()[g]);
    BitSet r(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (ctx.incident(g, cols[k])) r.set(k);
    }
    rows.push_back(std::move(r));
  });
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

FormalContext transpose(const FormalContext& ctx) {
  std::vector<BitSet> rows;
  rows.reserve(ctx.num_attributes());
  for (std::size_t m = 0; m < ctx.num_attributes(); ++m) rows.push_back(ctx.column(m));
  return FormalContext(ctx.attributes(), ctx.objects(), std::move(rows));
}

}  // namespace fcr
