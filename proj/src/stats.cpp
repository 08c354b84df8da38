#include "percept/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "percept/error.hpp"

namespace percept {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), Errc::length_mismatch,
          "series lengths differ: " + std::to_string(x.size()) + " vs " +
              std::to_string(y.size()));
  require(x.size() >= 3, Errc::too_few, "need at least 3 pairs");
  for (double v : x) require(std::isfinite(v), Errc::invariant_violation, "non-finite x value");
  for (double v : y) require(std::isfinite(v), Errc::invariant_violation, "non-finite y value");

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // rank mean is fixed

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  require(sxx > 0.0 && syy > 0.0, Errc::constant_series,
          "rank correlation undefined for a constant series");
  return sxy / std::sqrt(sxx * syy);
}

CorrelationReport correlate_experiment(const std::string& experiment,
                                       const std::string& platform, const std::string& feature,
                                       const std::string& metric, std::vector<GroupResult> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const GroupResult& a, const GroupResult& b) { return a.key < b.key; });
  std::vector<double> dist, acc;
  dist.reserve(rows.size());
  acc.reserve(rows.size());
  for (const auto& r : rows) {
    dist.push_back(r.mean_distance);
    acc.push_back(r.mean_accuracy);
  }
  CorrelationReport report;
  report.experiment = experiment;
  report.platform = platform;
  report.feature = feature;
  report.metric = metric;
  report.rho = spearman(dist, acc);
  report.abs_rho = std::abs(report.rho);
  report.n_groups = static_cast<int>(rows.size());
  report.rows = std::move(rows);
  return report;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const char* kMarkerColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

void scatter_export(const CorrelationReport& report, const std::filesystem::path& stem) {
  require(!report.rows.empty(), Errc::too_few, "nothing to export");

  std::filesystem::path csv_path = stem;
  csv_path += ".csv";
  std::ofstream csv(csv_path);
  require(csv.good(), Errc::io_error, "cannot write " + csv_path.string());
  csv << "group_key,mean_distance,mean_accuracy\n";
  for (const auto& r : report.rows)
    csv << r.key << "," << format_double(r.mean_distance) << ","
        << format_double(r.mean_accuracy) << "\n";
  require(csv.good(), Errc::io_error, "write failed for " + csv_path.string());
  csv.close();

  double xmin = report.rows[0].mean_distance, xmax = xmin;
  for (const auto& r : report.rows) {
    xmin = std::min(xmin, r.mean_distance);
    xmax = std::max(xmax, r.mean_distance);
  }
  if (xmax == xmin) xmax = xmin + 1.0;

  // one marker color per key family (prefix before the first '/')
  std::map<std::string, int> families;
  for (const auto& r : report.rows) {
    const auto family = r.key.substr(0, r.key.find('/'));
    families.emplace(family, static_cast<int>(families.size()));
  }

  const int w = 640, h = 480, ml = 70, mr = 170, mt = 40, mb = 60;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto px = [&](double d) { return ml + (d - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double a) { return mt + (1.0 - a) * ph; };

  std::filesystem::path svg_path = stem;
  svg_path += ".svg";
  std::ofstream svg(svg_path);
  require(svg.good(), Errc::io_error, "cannot write " + svg_path.string());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << report.experiment << " / " << report.platform << " / " << report.feature << " / "
      << report.metric << "  (rho=" << report.rho << ")</text>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << "average feature distance</text>\n"
      << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">top-5 accuracy</text>\n";
  for (int i = 0; i <= 5; ++i) {
    const double a = i / 5.0;
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(a) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << a
        << "</text>\n";
  }
  for (const auto& r : report.rows) {
    const auto family = r.key.substr(0, r.key.find('/'));
    const auto* color = kMarkerColors[families[family] % 10];
    svg << "<circle cx=\"" << px(r.mean_distance) << "\" cy=\"" << py(r.mean_accuracy)
        << "\" r=\"5\" fill=\"" << color << "\" fill-opacity=\"0.8\"><title>" << r.key
        << "</title></circle>\n";
  }
  int row = 0;
  for (const auto& [family, idx] : families) {
    const double ly = mt + 14 + 18.0 * row++;
    svg << "<circle cx=\"" << ml + pw + 18 << "\" cy=\"" << ly << "\" r=\"5\" fill=\""
        << kMarkerColors[idx % 10] << "\"/>\n"
        << "<text x=\"" << ml + pw + 30 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << family << "</text>\n";
  }
  svg << "</svg>\n";
  require(svg.good(), Errc::io_error, "write failed for " + svg_path.string());
}

}  // namespace percept
