#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tribench {

/// One Monte-Carlo trial outcome for one method and one error kind.
/// `value` is finite and non-negative whenever `converged` is set; failed
/// trials carry NaN and an explanation in `notes`.
struct TrialRecord {
  std::string experiment;
  int trial = 0;
  double level = 0.0;
  std::string method;
  std::string kind;  // position | distance | angle | aligned-3d
  double value = 0.0;
  bool converged = true;
  std::string notes;
};

/// Stable order (experiment, level, trial, method) used for CSV output.
void sort_records(std::vector<TrialRecord>& records);

/// Writes `experiment,trial,level,method,kind,value,converged,notes` rows,
/// LF line endings, 17 significant digits so doubles round-trip bit-exactly.
/// Records are sorted before writing.
void write_csv(std::vector<TrialRecord> records, const std::filesystem::path& path);

std::string to_csv_string(std::vector<TrialRecord> records);

std::vector<TrialRecord> read_csv(const std::filesystem::path& path);

std::vector<TrialRecord> parse_csv(const std::string& text);

}  // namespace tribench
