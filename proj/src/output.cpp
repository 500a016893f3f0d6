#include "mfbose/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mfbose {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char b[32];
  const auto res = std::to_chars(b, b + sizeof b, v);
  return std::string(b, res.ptr);
}

void CsvTable::meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }

void CsvTable::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw Error("CSV row has the wrong number of cells");
  rows_.push_back(cells);
}

std::string CsvTable::str() const {
  std::ostringstream o;
  o << kFileHeader << "\n";
  for (const auto& [k, v] : meta_) o << "# " << k << " = " << v << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) o << (i ? "," : "") << cells[i];
    o << "\n";
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return o.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_json(const std::filesystem::path& path, Json doc) {
  doc["format"] = std::string(kFileHeader).substr(2);
  write_text(path, doc.dump(2) + "\n");
}

std::filesystem::path output_root(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("MFBOSE_OUTPUT_ROOT"); env && *env) return env;
  return "runs";
}

}  // namespace mfbose
