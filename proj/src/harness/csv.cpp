#include "soul/harness/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace soul {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
  add_row(header);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::add_row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text_;
  if (!out) throw std::runtime_error("write failed: " + path);
}

CsvWriter trace_csv(const RunTrace& trace) {
  const std::size_t k = trace.theta_hat.size();
  std::vector<std::string> header{"iter", "delta"};
  for (std::size_t i = 0; i < k; ++i) header.push_back("theta_" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) header.push_back("avg_" + std::to_string(i));
  CsvWriter csv(header);
  for (std::size_t r = 0; r < trace.iterations.size(); ++r) {
    std::vector<std::string> row{std::to_string(trace.iterations[r]), format_double(trace.deltas[r])};
    for (double v : trace.thetas[r]) row.push_back(format_double(v));
    for (double v : trace.averaged[r]) row.push_back(format_double(v));
    csv.add_row(row);
  }
  return csv;
}

CsvWriter matrix_csv(const Matrix& m, const std::string& prefix) {
  std::vector<std::string> header;
  for (std::size_t j = 0; j < m.cols(); ++j) header.push_back(prefix + std::to_string(j));
  CsvWriter csv(header);
  for (std::size_t i = 0; i < m.rows(); ++i) csv.add_row(m.row(i));
  return csv;
}

CsvWriter vector_csv(std::span<const double> v, const std::string& column) {
  CsvWriter csv({column});
  for (double x : v) csv.add_row(std::span<const double>(&x, 1));
  return csv;
}

}  // namespace soul
