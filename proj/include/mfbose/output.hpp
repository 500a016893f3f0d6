#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfbose/common.hpp"

namespace mfbose {

using Json = nlohmann::json;

/// Shortest round-trip decimal form, so repeated runs write identical bytes.
std::string format_number(double v);

/// CSV table; the first line is the versioned header comment, followed by
/// optional "# key = value" metadata lines and the column names.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void meta(const std::string& key, const std::string& value);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

/// JSON document carrying the header string under "format".
void write_json(const std::filesystem::path& path, Json doc);

/// Directory for outputs: explicit value, else $MFBOSE_OUTPUT_ROOT, else "runs".
std::filesystem::path output_root(const std::string& explicit_dir = "");

}  // namespace mfbose
