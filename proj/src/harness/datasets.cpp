#include "soul/harness/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "soul/rng.hpp"

namespace soul {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r\"");
    const auto last = cell.find_last_not_of(" \t\r\"");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool is_missing(const std::string& s) { return s.empty() || s == "?" || s == "NA" || s == "na" || s == "NaN"; }

}  // namespace

LoadedDataset parse_csv_dataset(const std::string& text, double sigma2) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  std::vector<Vector> rows;
  Vector labels;
  LoadedDataset out;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cells = split_cells(line);
    if (line_no == 1) {
      double probe = 0.0;
      const bool header = std::any_of(cells.begin(), cells.end(),
                                      [&](const std::string& c) { return !is_missing(c) && !parse_number(c, probe); });
      if (header) {
        width = cells.size();
        continue;
      }
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                               " columns, found " + std::to_string(cells.size()));
    }
    if (width < 2) throw std::runtime_error("line " + std::to_string(line_no) + ": need features and a label");
    if (std::any_of(cells.begin(), cells.end(), is_missing)) {
      ++out.dropped_rows;
      continue;
    }
    Vector row(width - 1);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (!parse_number(cells[j], row[j])) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse `" + cells[j] + "`");
      }
    }
    double label = 0.0;
    if (!parse_number(cells.back(), label) || (label != 0.0 && label != 1.0)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": label `" + cells.back() + "` is not 0 or 1");
    }
    rows.push_back(std::move(row));
    labels.push_back(label);
  }
  if (rows.empty()) throw std::runtime_error("dataset has no complete rows");

  const std::size_t n = rows.size();
  const std::size_t p = width - 1;
  Matrix x(n, p + 1, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& r : rows) var += (r[j] - mean) * (r[j] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (!(sd > 0.0)) {
      out.warnings.push_back("feature column " + std::to_string(j) + " is constant; left unscaled");
      for (std::size_t i = 0; i < n; ++i) x(i, j) = rows[i][j];
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) x(i, j) = (rows[i][j] - mean) / sd;
  }
  out.data.covariates = std::move(x);
  out.data.labels = std::move(labels);
  out.data.sigma2 = sigma2;
  out.data.validate();
  return out;
}

LoadedDataset load_csv_dataset(const std::string& path, double sigma2) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_csv_dataset(ss.str(), sigma2);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::pair<LogisticData, LogisticData> train_test_split(const LogisticData& data, double test_fraction,
                                                       std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: test_fraction must lie in (0, 1)");
  }
  const std::size_t n = data.n_obs();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) throw std::invalid_argument("train_test_split: split leaves an empty side");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng(seed, 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  auto take = [&](std::size_t from, std::size_t to) {
    LogisticData part;
    part.sigma2 = data.sigma2;
    part.covariates = Matrix(to - from, data.dim());
    part.labels.resize(to - from);
    for (std::size_t r = from; r < to; ++r) {
      const auto src = data.covariates.row(order[r]);
      std::copy(src.begin(), src.end(), part.covariates.row(r - from).begin());
      part.labels[r - from] = data.labels[order[r]];
    }
    return part;
  };
  return {take(n_test, n), take(0, n_test)};
}

}  // namespace soul
