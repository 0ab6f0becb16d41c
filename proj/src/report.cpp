#include "reslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "reslab/errors.hpp"

namespace reslab {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw DomainError("table row width does not match the header");
  rows.push_back(std::move(row));
}

nlohmann::json Table::to_json() const {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["columns"] = columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    auto jr = nlohmann::json::array();
    for (double x : r) {
      if (std::isfinite(x)) jr.push_back(x);
      else jr.push_back(nullptr);
    }
    j["rows"].push_back(std::move(jr));
  }
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  if (x == std::trunc(x) && std::abs(x) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
  }
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  if (!metadata.empty()) {
    for (const auto& [key, value] : metadata.items()) os << "# " << key << ": " << value.dump() << '\n';
  }
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_number(r[c]);
    os << '\n';
  }
  return os.str();
}

}  // namespace reslab
