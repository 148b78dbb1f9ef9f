#include "tribench/records.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "tribench/errors.hpp"

namespace tribench {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, int line_no) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw FormatError("csv line " + std::to_string(line_no) +
                      ": bad numeric field '" + s + "'");
  }
}

}  // namespace

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) {
                     return std::tie(a.experiment, a.level, a.trial, a.method) <
                            std::tie(b.experiment, b.level, b.trial, b.method);
                   });
}

std::string to_csv_string(std::vector<TrialRecord> records) {
  sort_records(records);
  std::ostringstream out;
  out << "experiment,trial,level,method,kind,value,converged,notes\n";
  for (const TrialRecord& r : records) {
    out << sanitize(r.experiment) << ',' << r.trial << ',' << format_double(r.level)
        << ',' << sanitize(r.method) << ',' << sanitize(r.kind) << ','
        << format_double(r.value) << ',' << (r.converged ? 1 : 0) << ','
        << sanitize(r.notes) << '\n';
  }
  return out.str();
}

void write_csv(std::vector<TrialRecord> records, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  file << to_csv_string(std::move(records));
  if (!file) throw IoError("write failed: " + path.string());
}

std::vector<TrialRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: empty input");
  if (line != "experiment,trial,level,method,kind,value,converged,notes") {
    throw FormatError("csv: unexpected header '" + line + "'");
  }
  std::vector<TrialRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 8) {
      throw FormatError("csv line " + std::to_string(line_no) +
                        ": expected 8 fields, got " + std::to_string(fields.size()));
    }
    TrialRecord r;
    r.experiment = fields[0];
    r.trial = static_cast<int>(parse_double(fields[1], line_no));
    r.level = parse_double(fields[2], line_no);
    r.method = fields[3];
    r.kind = fields[4];
    r.value = parse_double(fields[5], line_no);
    r.converged = fields[6] == "1";
    r.notes = fields[7];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TrialRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace tribench
