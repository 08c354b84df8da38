#pragma once

#include <string>
#include <vector>

#include "percept/features.hpp"

namespace percept {

enum class DistanceKind {
  L1,
  L2,
  L2Squared,
  SAD,
  SSAD,
  Canberra,
  Chebyshev,
  Minkowski,
  BrayCurtis,
  Cosine,
};

struct DistanceSpec {
  DistanceKind kind = DistanceKind::L2;
  double p = 3.0;  // Minkowski order

  // CLI/config token: l1, l2, l2sq, sad, ssad, canberra, chebyshev,
  // minkowski or minkowski:p, braycurtis, cosine.
  static DistanceSpec parse(const std::string& token);
  std::string token() const;
};

// The l1/l2/l2sq kinds operate on unit-L2-normalized copies of the inputs;
// template-matching kinds (sad, ssad) and the remaining metrics see raw
// values. This is what keeps the formula-identical pairs distinct.
bool normalizes_inputs(DistanceKind kind);

const std::vector<DistanceKind>& all_distance_kinds();

double distance(const FeatureVector& a, const FeatureVector& b, const DistanceSpec& spec);

// Raw-vector core, no method/digest checks. Used by both the public entry
// point and tests that build vectors directly.
double distance_raw(const std::vector<double>& a, const std::vector<double>& b,
                    const DistanceSpec& spec);

// entry (i,j) = distance(refs[i], queries[j])
std::vector<std::vector<double>> distance_matrix(const std::vector<FeatureVector>& refs,
                                                 const std::vector<FeatureVector>& queries,
                                                 const DistanceSpec& spec);

}  // namespace percept
