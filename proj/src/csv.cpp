#include "itolab/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "itolab/batch.hpp"
#include "itolab/error.hpp"

namespace itolab {

std::size_t worker_threads() {
  if (const char* env = std::getenv("ITOLAB_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::initializer_list<Cell> cells) {
  return row(std::vector<Cell>(cells));
}

CsvTable& CsvTable::row(const std::vector<Cell>& cells) {
  if (cells.size() != header_.size()) {
    fail(ErrorKind::InvalidArgument, "csv row width does not match header");
  }
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (const Cell& c : cells) {
    if (const double* d = std::get_if<double>(&c)) text.push_back(format_double(*d));
    else if (const long long* i = std::get_if<long long>(&c)) text.push_back(std::to_string(*i));
    else text.push_back(std::get<std::string>(c));
  }
  rows_.push_back(std::move(text));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace itolab

#include "itolab/process.hpp"

namespace itolab {

namespace {

std::string node_header(std::size_t nodes) {
  std::string out;
  for (std::size_t k = 0; k < nodes; ++k) {
    if (k) out += ',';
    out += "t_" + std::to_string(k);
  }
  return out + '\n';
}

}  // namespace

std::string grid_csv(const TimeGrid& grid) {
  std::string out = node_header(grid.nodes().size());
  for (std::size_t k = 0; k < grid.nodes().size(); ++k) {
    if (k) out += ',';
    out += format_double(grid.node(k));
  }
  return out + '\n';
}

std::string ensemble_csv(const TimeGrid& grid, const PathMatrix& values) {
  if (values.rows() != grid.nodes().size()) {
    fail(ErrorKind::ShapeMismatch, "table rows do not match grid nodes");
  }
  std::string out = node_header(values.rows());
  for (std::size_t m = 0; m < values.paths(); ++m) {
    for (std::size_t k = 0; k < values.rows(); ++k) {
      if (k) out += ',';
      out += format_double(values.at(k, m));
    }
    out += '\n';
  }
  return out;
}

}  // namespace itolab
