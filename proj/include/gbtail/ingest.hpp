#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gbtail/sample.hpp"

namespace gbtail {

/// Raised for unreadable files, missing columns, or majority-bad rows.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PriceRecord {
  double price = 0.0;       // nominal currency units
  int year = 0;
  std::string property_class;
};

struct HpiRecord {
  std::string zip;          // 5-digit code
  int year = 0;
  double hpi = 0.0;         // dimensionless index
};

/// year -> price-level factor; constant-dollar conversion is
/// price * factor(base_year) / factor(year).
struct DeflatorTable {
  std::map<int, double> factor;
  int base_year = 0;

  void validate() const;
};

/// Column selector: a header name, or a 0-based index written as "#N".
struct ColumnRef {
  std::string spec;
};

struct PriceSchema {
  ColumnRef price{"price"};
  ColumnRef year{"year"};
  std::optional<ColumnRef> property_class;  // unset: column ignored
  int min_year = 1900;
  int max_year = 2100;
};

/// Defaults match the FHFA ZIP5 annual file layout: five-digit ZIP code,
/// year, annual change, HPI, then two rebased HPI columns.
struct HpiSchema {
  ColumnRef zip{"#0"};
  ColumnRef year{"#1"};
  ColumnRef hpi{"#3"};
};

/// Per-file accounting; accepted + skipped always equals total_rows.
struct IngestStats {
  std::int64_t total_rows = 0;
  std::int64_t accepted = 0;
  std::int64_t skipped = 0;
  std::vector<std::pair<std::string, std::int64_t>> skip_reasons;

  void note_skip(const std::string& reason);
};

struct PriceReadResult {
  std::vector<PriceRecord> records;
  IngestStats stats;
};

struct HpiReadResult {
  std::vector<HpiRecord> records;
  IngestStats stats;
};

/// Delimited text with a header row (comma or tab, auto-detected).
/// Unparseable rows are skipped and counted, but more than 50% bad rows is
/// a ParseError.
PriceReadResult read_prices(const std::string& path,
                            const PriceSchema& schema = {});

HpiReadResult read_hpi(const std::string& path, const HpiSchema& schema = {});

/// `year,factor` two-column file.
DeflatorTable read_deflator(const std::string& path, int base_year);

/// Convert to constant dollars and sort. Every record's year must be in
/// the table; missing years are collected into one error.
SortedSample deflate(const std::vector<PriceRecord>& records,
                     const DeflatorTable& table,
                     const std::string& label = "prices");

/// Pool the index values of the selected years, ascending. Duplicate
/// (zip, year) pairs have already collapsed to the last row at read time.
SortedSample select_hpi(const std::vector<HpiRecord>& records,
                        const std::set<int>& years,
                        const std::string& label = "hpi");

/// One value per line, '#' comments allowed; used for synthetic samples and
/// ingested outputs.
SortedSample load_sample(const std::string& path, const std::string& label);

/// Columnar variant: pick one column of a delimited file by ColumnRef.
SortedSample load_sample_column(const std::string& path,
                                const ColumnRef& column,
                                const std::string& label);

void save_sample(const std::string& path, const SortedSample& sample,
                 const std::vector<std::string>& header_comments);

}  // namespace gbtail
