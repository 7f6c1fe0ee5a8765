#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "soul/models/logistic.hpp"

namespace soul {

struct LoadedDataset {
  LogisticData data;
  std::size_t dropped_rows = 0;        ///< rows with a missing value
  std::vector<std::string> warnings;   ///< e.g. constant feature columns
};

/// Reads comma-separated numeric features followed by a 0/1 label. A
/// non-numeric first line is taken as a header. Rows with an empty, `?` or
/// `NA` cell are dropped. Features are z-scored per column (constant columns
/// are left unscaled with a warning) and an all-ones intercept column is
/// appended, so 9 raw features give d = 10. The z-score uses the population
/// standard deviation, so two rows map to exactly -1 and +1.
LoadedDataset load_csv_dataset(const std::string& path, double sigma2 = 5.0);
LoadedDataset parse_csv_dataset(const std::string& text, double sigma2 = 5.0);

/// Random split: round(test_fraction * n) rows go to the test set.
std::pair<LogisticData, LogisticData> train_test_split(const LogisticData& data, double test_fraction,
                                                       std::uint64_t seed);

}  // namespace soul
