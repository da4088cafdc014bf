#include "clams/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "clams/errors.hpp"
#include "clams/features.hpp"

namespace clams {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

CsvReader::CsvReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::IoError, "cannot read " + path.string());
}

void CsvReader::fail(const std::string& message) const {
  throw Error(ErrorCode::ParseError, path_.string() + ":" + std::to_string(line_) + ": " + message);
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    if (line_ == 1 && raw.size() >= 3 && raw.compare(0, 3, "\xEF\xBB\xBF") == 0) raw.erase(0, 3);
    if (trim(raw).empty()) continue;
    fields = split_csv(raw);
    return true;
  }
  return false;
}

std::vector<std::string> CsvReader::read_header() {
  std::vector<std::string> fields;
  if (!next(fields)) fail("missing header row");
  return fields;
}

void CsvReader::expect_header(const std::vector<std::string>& expected) {
  const std::vector<std::string> header = read_header();
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    fail("expected header '" + want + "'");
  }
}

double CsvReader::number(const std::string& field) const {
  double v = 0.0;
  if (!parse_double(field, v)) fail("'" + field + "' is not a number");
  return v;
}

long CsvReader::integer(const std::string& field) const {
  long v = 0;
  const char* first = field.data();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    fail("'" + field + "' is not an integer");
  }
  return v;
}

Scatterplot read_scatterplot(const std::filesystem::path& path) {
  if (path.extension() == ".json") return read_scatterplot_json(path);
  return read_scatterplot_csv(path);
}

Scatterplot read_scatterplot_csv(const std::filesystem::path& path) {
  CsvReader csv(path);
  csv.expect_header({"x", "y"});
  std::vector<Point> points;
  std::vector<std::string> f;
  while (csv.next(f)) {
    if (f.size() != 2) csv.fail("expected 2 fields, got " + std::to_string(f.size()));
    const Point p{csv.number(f[0]), csv.number(f[1])};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) csv.fail("non-finite coordinate");
    points.push_back(p);
  }
  return validate_scatterplot(std::move(points), path.stem().string());
}

Scatterplot read_scatterplot_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  try {
    std::vector<Point> points;
    for (const auto& p : doc.at("points")) {
      if (!p.is_array() || p.size() != 2) {
        throw Error(ErrorCode::ParseError, path.string() + ": point " +
                                               std::to_string(points.size()) +
                                               " is not an [x, y] pair");
      }
      points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    std::string id = doc.contains("id") ? doc.at("id").get<std::string>() : path.stem().string();
    return validate_scatterplot(std::move(points), std::move(id));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_scatterplot_csv(const Scatterplot& plot, const std::filesystem::path& path) {
  std::string text = "x,y\n";
  for (const Point& p : plot.points()) text += format12(p.x) + "," + format12(p.y) + "\n";
  write_text(path, text);
}

Clustering read_clustering_csv(const std::filesystem::path& path) {
  CsvReader csv(path);
  csv.expect_header({"label"});
  std::vector<int> labels;
  std::vector<std::string> f;
  while (csv.next(f)) {
    if (f.size() != 1) csv.fail("expected 1 field, got " + std::to_string(f.size()));
    const long v = csv.integer(f[0]);
    if (v < -1) csv.fail("labels must be >= -1");
    labels.push_back(static_cast<int>(v));
  }
  return Clustering(std::move(labels));
}

void write_clustering_csv(const Clustering& labels, const std::filesystem::path& path) {
  std::string text = "label\n";
  for (int l : labels.labels()) text += std::to_string(l) + "\n";
  write_text(path, text);
}

TrainingSet read_training_csv(const std::filesystem::path& path, Provenance provenance) {
  CsvReader csv(path);
  csv.expect_header({"dc", "dsr", "dd", "sd", "ed", "ac", "label"});
  TrainingSet data;
  data.provenance = provenance;
  std::vector<std::string> f;
  while (csv.next(f)) {
    if (f.size() != 7) csv.fail("expected 7 fields, got " + std::to_string(f.size()));
    LabeledPair row;
    row.features.dc = csv.number(f[0]);
    row.features.dsr = csv.number(f[1]);
    row.features.dd = csv.number(f[2]);
    row.features.sd = csv.number(f[3]);
    row.features.ed = csv.number(f[4]);
    row.features.ac = csv.number(f[5]);
    row.label = csv.number(f[6]);
    if (!(row.label >= 0.0 && row.label <= 1.0)) {
      throw Error(ErrorCode::RangeError, path.string() + ":" + std::to_string(csv.line()) +
                                             ": label outside [0, 1]");
    }
    data.rows.push_back(row);
  }
  return data;
}

void write_training_csv(const TrainingSet& data, const std::filesystem::path& path) {
  std::string text = "dc,dsr,dd,sd,ed,ac,label\n";
  for (const LabeledPair& r : data.rows) {
    const PairFeatures& f = r.features;
    for (double v : {f.dc, f.dsr, f.dd, f.sd, f.ed, f.ac}) text += format12(v) + ",";
    text += format12(r.label) + "\n";
  }
  write_text(path, text);
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path) {
  CsvReader csv(path);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> f;
  bool first = true;
  while (csv.next(f)) {
    std::vector<double> row;
    row.reserve(f.size());
    bool numeric = true;
    for (const std::string& s : f) {
      double v = 0.0;
      if (!parse_double(s, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      csv.fail("non-numeric field");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      csv.fail("expected " + std::to_string(rows.front().size()) + " fields, got " +
               std::to_string(row.size()));
    }
    for (double v : row) {
      if (!std::isfinite(v)) csv.fail("non-finite value");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, path.string() + ": no data rows");
  return rows;
}

double round12(double v) noexcept {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string format12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace clams
