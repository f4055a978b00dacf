#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace sagnac::report {

using Value = std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

/// Named scalar or list reported after the rows (fits, maxima, verdicts).
struct Note {
  std::string key;
  Value value;
};

struct Table {
  std::string command;
  std::vector<std::string> header;  ///< echo lines, written as `# ...` in CSV
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Note> summary;

  const Note* find(const std::string& key) const;
};

enum class Format { csv, json };

inline constexpr const char* kSchemaLine = "# sagnac-qfi v1";

/// Header, column names, rows, then summary as trailing `# key=value` lines.
void write_csv(std::ostream& os, const Table& table);
void write_json(std::ostream& os, const Table& table);
void write(std::ostream& os, const Table& table, Format format);

}  // namespace sagnac::report
