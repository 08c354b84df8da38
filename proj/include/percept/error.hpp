#pragma once

#include <stdexcept>
#include <string>

namespace percept {

enum class Errc {
  // imaging
  malformed_stream,
  unsupported_format,
  even_kernel,
  // features
  gray_input,
  too_small,
  geometry_mismatch,
  unknown_image_id,
  dim_mismatch,
  corrupt_record,
  // distances
  method_mismatch,
  zero_vector_cosine,
  // challenges
  bad_level,
  // recognition
  empty_set,
  unknown_object,
  parse_error,
  invariant_violation,
  endpoint_unreachable,
  auth_rejected,
  // experiments
  empty_manifest,
  missing_reference,
  missing_feature,
  missing_prediction,
  // stats
  length_mismatch,
  too_few,
  constant_series,
  // general
  io_error,
  bad_config,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_stream: return "MalformedStream";
    case Errc::unsupported_format: return "UnsupportedFormat";
    case Errc::even_kernel: return "EvenKernel";
    case Errc::gray_input: return "GrayInput";
    case Errc::too_small: return "TooSmall";
    case Errc::geometry_mismatch: return "GeometryMismatch";
    case Errc::unknown_image_id: return "UnknownImageId";
    case Errc::dim_mismatch: return "DimMismatch";
    case Errc::corrupt_record: return "CorruptRecord";
    case Errc::method_mismatch: return "MethodMismatch";
    case Errc::zero_vector_cosine: return "ZeroVectorCosine";
    case Errc::bad_level: return "BadLevel";
    case Errc::empty_set: return "EmptySet";
    case Errc::unknown_object: return "UnknownObject";
    case Errc::parse_error: return "ParseError";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::endpoint_unreachable: return "EndpointUnreachable";
    case Errc::auth_rejected: return "AuthRejected";
    case Errc::empty_manifest: return "EmptyManifest";
    case Errc::missing_reference: return "MissingReference";
    case Errc::missing_feature: return "MissingFeature";
    case Errc::missing_prediction: return "MissingPrediction";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::too_few: return "TooFew";
    case Errc::constant_series: return "ConstantSeries";
    case Errc::io_error: return "IoError";
    case Errc::bad_config: return "BadConfig";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, Errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace percept
