#pragma once

// Sample ingestion: CSV (one value per line) and JSON (flat array of
// numbers).  Malformed rows are rejected with line- or index-numbered
// parse_error so the offending record can be found.

#include <istream>
#include <string>

#include "ttest/statistics_core.hpp"

namespace ttest {

// Reads one numeric value per line.  Blank lines are skipped; anything that
// is not a single finite number is rejected with the 1-based line number.
// With skip_header the first non-blank line is ignored.
Sample read_sample_csv(std::istream& in, bool skip_header = false);

// Reads a JSON array of finite numbers.  Any other shape or element type is
// rejected; the element index is reported for bad entries.
Sample read_sample_json(std::istream& in);

// Dispatches on file extension: ".json" -> JSON array, anything else -> CSV.
Sample read_sample_file(const std::string& path, bool skip_header = false);

}  // namespace ttest
