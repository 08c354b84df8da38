#pragma once

#include <cstdint>
#include <string>

#include "percept/image.hpp"

namespace percept {

enum class ChallengeKind {
  Underexposure,
  Overexposure,
  GaussianBlur,
  Contrast,
  DirtyLens,
  SaltPepper,
  Resize,
};

std::string challenge_name(ChallengeKind kind);
ChallengeKind parse_challenge(const std::string& token);

struct ChallengeSpec {
  ChallengeKind kind = ChallengeKind::GaussianBlur;
  int level = 0;        // 0 = identity
  uint64_t seed = 0;    // consumed by SaltPepper and DirtyLens
};

// One severity schedule, centralized so recalibration stays a table edit.
struct ChallengeParams {
  double gain = 1.0;          // exposure multiplier
  double sigma = 0.0;         // Gaussian blur
  double alpha = 0.0;         // contrast blend toward mid-gray
  double gamma = 1.0;         // contrast gamma tilt
  int blob_count = 0;         // dirty lens
  double blob_opacity = 0.0;  // dirty lens
  double density = 0.0;       // salt & pepper altered-pixel fraction
  double scale = 1.0;         // resize down-scale factor
};

// Throws BadLevel outside 0..5. Level 0 is the identity record.
ChallengeParams challenge_schedule(ChallengeKind kind, int level);

// Level 0 returns the input bitwise-unchanged; output dimensions always
// equal the input's (Resize down-samples then restores).
Image apply_challenge(const Image& img, const ChallengeSpec& spec);

uint64_t default_challenge_seed(const std::string& image_id, ChallengeKind kind, int level);

}  // namespace percept
