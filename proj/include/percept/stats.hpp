#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace percept {

// Average ranks (1-based); ties share the mean of the positions they cover.
std::vector<double> average_ranks(const std::vector<double>& values);

// Tie-corrected Spearman rho: Pearson correlation of the rank series.
// Throws LengthMismatch / TooFew (< 3) / ConstantSeries.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct GroupResult {
  std::string key;
  double mean_distance = 0.0;
  double mean_accuracy = 0.0;
  int member_count = 0;
};

struct CorrelationReport {
  std::string experiment;  // "background" | "orientation"
  std::string platform;
  std::string feature;
  std::string metric;
  double rho = 0.0;
  double abs_rho = 0.0;
  int n_groups = 0;
  std::vector<GroupResult> rows;
};

// rho over (mean_distance, mean_accuracy) pairs of the rows.
CorrelationReport correlate_experiment(const std::string& experiment,
                                       const std::string& platform, const std::string& feature,
                                       const std::string& metric, std::vector<GroupResult> rows);

// Writes <stem>.csv (group_key,mean_distance,mean_accuracy) and <stem>.svg.
// Marker class per group key family (the prefix before the first '/').
void scatter_export(const CorrelationReport& report, const std::filesystem::path& stem);

}  // namespace percept
