#include "ttest/sample_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ttest {

namespace {

bool is_blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

double parse_number(const std::string& token, int line_no) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "line " << line_no << ": not a number: '" << token << "'";
    throw parse_error(os.str(), line_no);
  }
  // Reject trailing garbage ("1.5abc") and embedded separators ("1,2").
  while (consumed < token.size() &&
         std::isspace(static_cast<unsigned char>(token[consumed]))) {
    ++consumed;
  }
  if (consumed != token.size()) {
    std::ostringstream os;
    os << "line " << line_no << ": trailing characters after number: '"
       << token << "'";
    throw parse_error(os.str(), line_no);
  }
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "line " << line_no << ": value is not finite: '" << token << "'";
    throw parse_error(os.str(), line_no);
  }
  return value;
}

}  // namespace

Sample read_sample_csv(std::istream& in, bool skip_header) {
  Sample s;
  std::string line;
  int line_no = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    s.values.push_back(parse_number(line, line_no));
  }
  if (s.values.empty()) {
    throw parse_error("no data rows found", line_no);
  }
  return s;
}

Sample read_sample_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!doc.is_array()) {
    throw parse_error("expected a JSON array of numbers", 0);
  }
  Sample s;
  s.values.reserve(doc.size());
  int index = 0;
  for (const auto& item : doc) {
    if (!item.is_number()) {
      std::ostringstream os;
      os << "element " << index << ": not a number";
      throw parse_error(os.str(), index);
    }
    const double v = item.get<double>();
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "element " << index << ": value is not finite";
      throw parse_error(os.str(), index);
    }
    s.values.push_back(v);
    ++index;
  }
  if (s.values.empty()) {
    throw parse_error("empty JSON array", 0);
  }
  return s;
}

Sample read_sample_file(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) {
    throw parse_error("cannot open file: " + path, 0);
  }
  const bool json = path.size() >= 5 &&
                    path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? read_sample_json(in) : read_sample_csv(in, skip_header);
}

}  // namespace ttest
