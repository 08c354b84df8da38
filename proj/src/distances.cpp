#include "percept/distances.hpp"

#include <algorithm>
#include <cmath>

#include "percept/error.hpp"

namespace percept {

namespace {

std::vector<double> unit_l2(const std::vector<double>& v) {
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  if (norm_sq == 0.0) return v;
  const double inv = 1.0 / std::sqrt(norm_sq);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
  return out;
}

double sum_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double sum_sq_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

bool normalizes_inputs(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::L1:
    case DistanceKind::L2:
    case DistanceKind::L2Squared:
      return true;
    default:
      return false;
  }
}

const std::vector<DistanceKind>& all_distance_kinds() {
  static const std::vector<DistanceKind> kinds = {
      DistanceKind::L1,        DistanceKind::L2,         DistanceKind::L2Squared,
      DistanceKind::SAD,       DistanceKind::SSAD,       DistanceKind::Canberra,
      DistanceKind::Chebyshev, DistanceKind::Minkowski,  DistanceKind::BrayCurtis,
      DistanceKind::Cosine};
  return kinds;
}

DistanceSpec DistanceSpec::parse(const std::string& token) {
  DistanceSpec spec;
  std::string name = token;
  if (auto colon = token.find(':'); colon != std::string::npos) {
    name = token.substr(0, colon);
    try {
      spec.p = std::stod(token.substr(colon + 1));
    } catch (const std::exception&) {
      fail(Errc::bad_config, "bad Minkowski order in '" + token + "'");
    }
    require(std::isfinite(spec.p) && spec.p > 0.0, Errc::bad_config,
            "Minkowski order must be finite and > 0");
  }
  if (name == "l1") spec.kind = DistanceKind::L1;
  else if (name == "l2") spec.kind = DistanceKind::L2;
  else if (name == "l2sq") spec.kind = DistanceKind::L2Squared;
  else if (name == "sad") spec.kind = DistanceKind::SAD;
  else if (name == "ssad") spec.kind = DistanceKind::SSAD;
  else if (name == "canberra") spec.kind = DistanceKind::Canberra;
  else if (name == "chebyshev") spec.kind = DistanceKind::Chebyshev;
  else if (name == "minkowski") spec.kind = DistanceKind::Minkowski;
  else if (name == "braycurtis") spec.kind = DistanceKind::BrayCurtis;
  else if (name == "cosine") spec.kind = DistanceKind::Cosine;
  else fail(Errc::bad_config, "unknown metric '" + token + "'");
  return spec;
}

std::string DistanceSpec::token() const {
  switch (kind) {
    case DistanceKind::L1: return "l1";
    case DistanceKind::L2: return "l2";
    case DistanceKind::L2Squared: return "l2sq";
    case DistanceKind::SAD: return "sad";
    case DistanceKind::SSAD: return "ssad";
    case DistanceKind::Canberra: return "canberra";
    case DistanceKind::Chebyshev: return "chebyshev";
    case DistanceKind::Minkowski: return "minkowski:" + std::to_string(p);
    case DistanceKind::BrayCurtis: return "braycurtis";
    case DistanceKind::Cosine: return "cosine";
  }
  return "?";
}

double distance_raw(const std::vector<double>& a, const std::vector<double>& b,
                    const DistanceSpec& spec) {
  require(a.size() == b.size(), Errc::dim_mismatch,
          "vector lengths differ: " + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()));
  switch (spec.kind) {
    case DistanceKind::L1:
      return sum_abs_diff(unit_l2(a), unit_l2(b));
    case DistanceKind::L2:
      return std::sqrt(sum_sq_diff(unit_l2(a), unit_l2(b)));
    case DistanceKind::L2Squared:
      return sum_sq_diff(unit_l2(a), unit_l2(b));
    case DistanceKind::SAD:
      return sum_abs_diff(a, b);
    case DistanceKind::SSAD:
      return sum_sq_diff(a, b);
    case DistanceKind::Canberra: {
      double s = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        const double denom = std::abs(a[i]) + std::abs(b[i]);
        if (denom > 0.0) s += std::abs(a[i] - b[i]) / denom;
      }
      return s;
    }
    case DistanceKind::Chebyshev: {
      double m = 0.0;
      for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
      return m;
    }
    case DistanceKind::Minkowski: {
      require(std::isfinite(spec.p) && spec.p > 0.0, Errc::bad_config,
              "Minkowski order must be finite and > 0");
      double s = 0.0;
      for (size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), spec.p);
      return std::pow(s, 1.0 / spec.p);
    }
    case DistanceKind::BrayCurtis: {
      double num = 0.0, denom = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        num += std::abs(a[i] - b[i]);
        denom += a[i] + b[i];
      }
      return denom == 0.0 ? 0.0 : num / denom;
    }
    case DistanceKind::Cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      require(na > 0.0 && nb > 0.0, Errc::zero_vector_cosine,
              "cosine distance undefined for a zero vector");
      return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    }
  }
  fail(Errc::bad_config, "unhandled distance kind");
}

double distance(const FeatureVector& a, const FeatureVector& b, const DistanceSpec& spec) {
  require(a.method == b.method && a.external_name == b.external_name, Errc::method_mismatch,
          "cannot compare " + a.method_label() + " with " + b.method_label());
  require(a.dim() == b.dim(), Errc::dim_mismatch,
          "dims differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  return distance_raw(a.values, b.values, spec);
}

std::vector<std::vector<double>> distance_matrix(const std::vector<FeatureVector>& refs,
                                                 const std::vector<FeatureVector>& queries,
                                                 const DistanceSpec& spec) {
  std::vector<std::vector<double>> out(refs.size(), std::vector<double>(queries.size(), 0.0));
  for (size_t i = 0; i < refs.size(); ++i)
    for (size_t j = 0; j < queries.size(); ++j) out[i][j] = distance(refs[i], queries[j], spec);
  return out;
}

}  // namespace percept
