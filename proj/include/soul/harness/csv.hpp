#pragma once

#include <string>
#include <vector>

#include "soul/core.hpp"
#include "soul/linalg.hpp"

namespace soul {

/// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

/// Comma-separated rows under a header, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  void add_row(std::span<const double> values);

  std::string str() const { return text_; }
  void write(const std::string& path) const;

 private:
  std::size_t width_;
  std::string text_;
};

/// Trace CSV: iter,delta,theta_0..,avg_0..
CsvWriter trace_csv(const RunTrace& trace);

CsvWriter matrix_csv(const Matrix& m, const std::string& prefix);
CsvWriter vector_csv(std::span<const double> v, const std::string& column);

}  // namespace soul
