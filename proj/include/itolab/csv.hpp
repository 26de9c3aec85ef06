#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace itolab {

/// %.17g: enough digits to round-trip any double.
std::string format_double(double x);

class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::initializer_list<Cell> cells);
  CsvTable& row(const std::vector<Cell>& cells);

  std::size_t size() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace itolab

namespace itolab {

class TimeGrid;
class PathMatrix;

/// Header t_0,...,t_N and a single row of node times.
std::string grid_csv(const TimeGrid& grid);
/// Header t_0,...,t_N and one row per path of a node-by-path table.
std::string ensemble_csv(const TimeGrid& grid, const PathMatrix& values);

}  // namespace itolab
