#include "sagnac/report.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "sagnac/format.hpp"

namespace sagnac::report {
namespace {

std::string value_text(const Value& v) {
  struct Visitor {
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const std::vector<double>& xs) const {
      std::string out;
      for (double x : xs) out += (out.empty() ? "" : ",") + format_double(x);
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

// Non-finite doubles become null so the document stays valid JSON.
nlohmann::json number(double d) {
  if (!std::isfinite(d)) return nullptr;
  return d;
}

nlohmann::json value_json(const Value& v) {
  struct Visitor {
    nlohmann::json operator()(double d) const { return number(d); }
    nlohmann::json operator()(std::int64_t i) const { return i; }
    nlohmann::json operator()(bool b) const { return b; }
    nlohmann::json operator()(const std::string& s) const { return s; }
    nlohmann::json operator()(const std::vector<double>& xs) const {
      auto arr = nlohmann::json::array();
      for (double x : xs) arr.push_back(number(x));
      return arr;
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

const Note* Table::find(const std::string& key) const {
  for (const auto& n : summary)
    if (n.key == key) return &n;
  return nullptr;
}

void write_csv(std::ostream& os, const Table& t) {
  os << kSchemaLine << '\n';
  os << "# command=" << t.command << '\n';
  for (const auto& h : t.header) os << "# " << h << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  for (const auto& n : t.summary) os << "# " << n.key << '=' << value_text(n.value) << '\n';
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json doc;
  doc["schema"] = "sagnac-qfi v1";
  doc["command"] = t.command;
  doc["header"] = t.header;
  doc["columns"] = t.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::json::array();
    for (double d : row) r.push_back(number(d));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& n : t.summary) summary[n.key] = value_json(n.value);
  doc["summary"] = std::move(summary);
  os << doc.dump(2) << '\n';
}

void write(std::ostream& os, const Table& t, Format f) {
  if (f == Format::json)
    write_json(os, t);
  else
    write_csv(os, t);
}

}  // namespace sagnac::report
