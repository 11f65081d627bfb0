#include "gbtail/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gbtail {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Split one delimited line, honoring double-quoted fields.
std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(trim(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

char detect_delimiter(const std::string& header) {
  const auto commas = std::count(header.begin(), header.end(), ',');
  const auto tabs = std::count(header.begin(), header.end(), '\t');
  return tabs > commas ? '\t' : ',';
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// Resolve a ColumnRef against the header: "#N" is a 0-based index,
// anything else a (case-insensitive) header name.
std::size_t resolve_column(const ColumnRef& ref,
                           const std::vector<std::string>& header,
                           const std::string& path) {
  if (!ref.spec.empty() && ref.spec[0] == '#') {
    int idx = -1;
    if (!parse_int(ref.spec.substr(1), idx) || idx < 0 ||
        static_cast<std::size_t>(idx) >= header.size()) {
      throw ParseError("column index '" + ref.spec + "' out of range for " +
                       path);
    }
    return static_cast<std::size_t>(idx);
  }
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  const std::string want = lower(ref.spec);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lower(header[i]) == want) return i;
  }
  throw ParseError("column '" + ref.spec + "' not found in header of " +
                   path);
}

struct DelimitedFile {
  std::ifstream stream;
  char delim = ',';
  std::vector<std::string> header;
};

DelimitedFile open_delimited(const std::string& path) {
  DelimitedFile file;
  file.stream.open(path);
  if (!file.stream) {
    throw ParseError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(file.stream, line)) {
    throw ParseError("empty file: " + path);
  }
  file.delim = detect_delimiter(line);
  file.header = split_line(line, file.delim);
  return file;
}

void check_majority(const IngestStats& stats, const std::string& path) {
  if (stats.total_rows > 0 && 2 * stats.skipped > stats.total_rows) {
    throw ParseError("more than half of the rows in " + path +
                     " failed to parse (" + std::to_string(stats.skipped) +
                     " of " + std::to_string(stats.total_rows) + ")");
  }
}

}  // namespace

void IngestStats::note_skip(const std::string& reason) {
  ++skipped;
  for (auto& [name, count] : skip_reasons) {
    if (name == reason) {
      ++count;
      return;
    }
  }
  skip_reasons.emplace_back(reason, 1);
}

void DeflatorTable::validate() const {
  if (factor.find(base_year) == factor.end()) {
    throw std::domain_error("deflator table missing its base year " +
                            std::to_string(base_year));
  }
  for (const auto& [year, f] : factor) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw std::domain_error("deflator factor for " + std::to_string(year) +
                              " must be positive, got " + std::to_string(f));
    }
  }
}

PriceReadResult read_prices(const std::string& path,
                            const PriceSchema& schema) {
  auto file = open_delimited(path);
  const std::size_t price_col = resolve_column(schema.price, file.header, path);
  const std::size_t year_col = resolve_column(schema.year, file.header, path);
  std::optional<std::size_t> class_col;
  if (schema.property_class) {
    class_col = resolve_column(*schema.property_class, file.header, path);
  }

  PriceReadResult out;
  std::string line;
  while (std::getline(file.stream, line)) {
    if (trim(line).empty()) continue;
    ++out.stats.total_rows;
    const auto fields = split_line(line, file.delim);
    if (fields.size() <= std::max(price_col, year_col)) {
      out.stats.note_skip("too few columns");
      continue;
    }
    PriceRecord rec;
    if (!parse_double(fields[price_col], rec.price)) {
      out.stats.note_skip("unparseable price");
      continue;
    }
    if (rec.price <= 0.0) {
      out.stats.note_skip("non-positive price");
      continue;
    }
    if (!parse_int(fields[year_col], rec.year)) {
      out.stats.note_skip("unparseable year");
      continue;
    }
    if (rec.year < schema.min_year || rec.year > schema.max_year) {
      out.stats.note_skip("year out of range");
      continue;
    }
    if (class_col && *class_col < fields.size()) {
      rec.property_class = fields[*class_col];
    }
    out.records.push_back(std::move(rec));
    ++out.stats.accepted;
  }
  check_majority(out.stats, path);
  return out;
}

HpiReadResult read_hpi(const std::string& path, const HpiSchema& schema) {
  auto file = open_delimited(path);
  const std::size_t zip_col = resolve_column(schema.zip, file.header, path);
  const std::size_t year_col = resolve_column(schema.year, file.header, path);
  const std::size_t hpi_col = resolve_column(schema.hpi, file.header, path);

  HpiReadResult out;
  std::map<std::pair<std::string, int>, std::size_t> seen;
  std::int64_t duplicates = 0;
  std::string line;
  while (std::getline(file.stream, line)) {
    if (trim(line).empty()) continue;
    ++out.stats.total_rows;
    const auto fields = split_line(line, file.delim);
    if (fields.size() <= std::max({zip_col, year_col, hpi_col})) {
      out.stats.note_skip("too few columns");
      continue;
    }
    HpiRecord rec;
    rec.zip = fields[zip_col];
    // tolerate numeric zips that lost leading zeros
    if (rec.zip.size() < 5 &&
        std::all_of(rec.zip.begin(), rec.zip.end(),
                    [](unsigned char c) { return std::isdigit(c); }) &&
        !rec.zip.empty()) {
      rec.zip.insert(0, 5 - rec.zip.size(), '0');
    }
    if (rec.zip.size() != 5 ||
        !std::all_of(rec.zip.begin(), rec.zip.end(), [](unsigned char c) {
          return std::isdigit(c);
        })) {
      out.stats.note_skip("invalid zip");
      continue;
    }
    if (!parse_int(fields[year_col], rec.year)) {
      out.stats.note_skip("unparseable year");
      continue;
    }
    if (!parse_double(fields[hpi_col], rec.hpi)) {
      out.stats.note_skip("non-numeric hpi");
      continue;
    }
    if (rec.hpi <= 0.0) {
      out.stats.note_skip("non-positive hpi");
      continue;
    }
    const auto key = std::make_pair(rec.zip, rec.year);
    const auto it = seen.find(key);
    if (it != seen.end()) {
      out.records[it->second] = std::move(rec);  // last wins
      out.stats.note_skip("duplicate (zip, year): earlier row displaced");
      ++duplicates;
      continue;
    }
    seen.emplace(key, out.records.size());
    out.records.push_back(std::move(rec));
    ++out.stats.accepted;
  }
  // duplicates are parseable rows displaced by policy, not failures
  IngestStats hard = out.stats;
  hard.skipped -= duplicates;
  check_majority(hard, path);
  return out;
}

DeflatorTable read_deflator(const std::string& path, int base_year) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open deflator file " + path);
  DeflatorTable table;
  table.base_year = base_year;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_line(t, detect_delimiter(t));
    int year = 0;
    double factor = 0.0;
    if (fields.size() < 2 || !parse_int(fields[0], year) ||
        !parse_double(fields[1], factor)) {
      if (first) {  // tolerate a header row
        first = false;
        continue;
      }
      throw ParseError("bad deflator row in " + path + ": " + t);
    }
    first = false;
    table.factor[year] = factor;
  }
  table.validate();
  return table;
}

SortedSample deflate(const std::vector<PriceRecord>& records,
                     const DeflatorTable& table, const std::string& label) {
  table.validate();
  std::set<int> missing;
  for (const auto& rec : records) {
    if (table.factor.find(rec.year) == table.factor.end()) {
      missing.insert(rec.year);
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "deflator table missing years:";
    for (int y : missing) msg << ' ' << y;
    throw std::domain_error(msg.str());
  }
  const double base = table.factor.at(table.base_year);
  std::vector<double> constant;
  constant.reserve(records.size());
  for (const auto& rec : records) {
    constant.push_back(rec.price * base / table.factor.at(rec.year));
  }
  return SortedSample::from_values(std::move(constant), label);
}

SortedSample select_hpi(const std::vector<HpiRecord>& records,
                        const std::set<int>& years,
                        const std::string& label) {
  if (years.empty()) {
    throw std::domain_error("select_hpi requires a nonempty year set");
  }
  std::vector<double> values;
  for (const auto& rec : records) {
    if (years.count(rec.year)) values.push_back(rec.hpi);
  }
  if (values.empty()) {
    throw std::domain_error("select_hpi: no records match the year set");
  }
  return SortedSample::from_values(std::move(values), label);
}

SortedSample load_sample(const std::string& path, const std::string& label) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sample file " + path);
  std::vector<double> values;
  std::string line;
  std::int64_t bad = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    double v = 0.0;
    if (!parse_double(t, v)) {
      ++bad;
      continue;
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw ParseError("no values in sample file " + path);
  }
  if (2 * bad > static_cast<std::int64_t>(values.size())) {
    throw ParseError("more than half of the lines in " + path +
                     " are not numbers");
  }
  return SortedSample::from_values(std::move(values), label);
}

SortedSample load_sample_column(const std::string& path,
                                const ColumnRef& column,
                                const std::string& label) {
  auto file = open_delimited(path);
  const std::size_t col = resolve_column(column, file.header, path);
  std::vector<double> values;
  std::string line;
  std::int64_t total = 0;
  std::int64_t bad = 0;
  while (std::getline(file.stream, line)) {
    if (trim(line).empty()) continue;
    ++total;
    const auto fields = split_line(line, file.delim);
    double v = 0.0;
    if (col >= fields.size() || !parse_double(fields[col], v) || v <= 0.0) {
      ++bad;
      continue;
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw ParseError("no usable values in column '" + column.spec + "' of " +
                     path);
  }
  if (2 * bad > total) {
    throw ParseError("more than half of the rows in " + path +
                     " lack a usable value");
  }
  return SortedSample::from_values(std::move(values), label);
}

void save_sample(const std::string& path, const SortedSample& sample,
                 const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  for (const auto& comment : header_comments) {
    out << "# " << comment << '\n';
  }
  out.precision(17);
  for (std::int64_t i = 0; i < sample.m(); ++i) {
    out << sample.values()[i] << '\n';
  }
  if (!out) throw ParseError("failed while writing " + path);
}

}  // namespace gbtail
