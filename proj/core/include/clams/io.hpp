#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "clams/separability.hpp"
#include "clams/types.hpp"

namespace clams {

// Line-oriented CSV reader that tracks line numbers for error messages.
// Fields are comma separated without quoting; blank lines are skipped and a
// trailing '\r' is dropped.
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);

  // Reads the header row and throws ParseError unless it equals `expected`.
  void expect_header(const std::vector<std::string>& expected);
  std::vector<std::string> read_header();

  // False at end of file.
  bool next(std::vector<std::string>& fields);

  std::size_t line() const noexcept { return line_; }
  const std::filesystem::path& path() const noexcept { return path_; }

  [[noreturn]] void fail(const std::string& message) const;
  double number(const std::string& field) const;
  long integer(const std::string& field) const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

std::vector<std::string> split_csv(std::string_view line);

// Point files: CSV with header "x,y" or JSON {"id": ..., "points": [[x, y], ...]}.
// The format is chosen by extension (.json, otherwise CSV). CSV plots take
// the file stem as id.
Scatterplot read_scatterplot(const std::filesystem::path& path);
Scatterplot read_scatterplot_csv(const std::filesystem::path& path);
Scatterplot read_scatterplot_json(const std::filesystem::path& path);
void write_scatterplot_csv(const Scatterplot& plot, const std::filesystem::path& path);

// Clustering files: CSV with header "label", one integer per row.
Clustering read_clustering_csv(const std::filesystem::path& path);
void write_clustering_csv(const Clustering& labels, const std::filesystem::path& path);

// Training rows: header "dc,dsr,dd,sd,ed,ac,label".
TrainingSet read_training_csv(const std::filesystem::path& path,
                              Provenance provenance = Provenance::External);
void write_training_csv(const TrainingSet& data, const std::filesystem::path& path);

// Dense numeric table, one row per point. A non-numeric first row is
// treated as a header and skipped. All rows must have the same width.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path);

// Rounds to 12 significant digits so that serialized reports are byte-stable.
double round12(double v) noexcept;

// Formats a number with up to 12 significant digits.
std::string format12(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace clams
