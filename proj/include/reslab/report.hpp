#pragma once

// Column-oriented numeric tables with a metadata block, written as JSON or CSV.

#include <string>
#include <vector>

#include "json.hpp"

namespace reslab {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata = nlohmann::json::object();

  void add_row(std::vector<double> row);
  /// {"metadata": ..., "columns": [...], "rows": [[...], ...]}
  nlohmann::json to_json() const;
  /// Metadata as '#'-prefixed JSON lines, a header row, then the data rows.
  std::string to_csv() const;
};

/// Shortest decimal form that round-trips (at most 17 significant digits).
std::string format_number(double x);

}  // namespace reslab
