#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "percept/features.hpp"

namespace percept {

// Vector store keyed by image id. Two interchangeable encodings:
//   binary: magic "EMB1", u32 dim, u32 count, then per record
//           u16 id-length, UTF-8 id, dim float32 values (little-endian)
//   text:   CSV lines `id,v0,...,v{dim-1}`
// The store carries no method tag; the caller names the method when opening
// (CLI maps store files to feature labels).
class EmbeddingStore {
 public:
  static EmbeddingStore open(const std::filesystem::path& path, const std::string& method_label);

  uint32_t dim() const { return dim_; }
  size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  bool contains(const std::string& image_id) const;

  // Returns the stored vector verbatim. Throws UnknownImageId.
  FeatureVector get(const std::string& image_id) const;

 private:
  EmbeddingStore() = default;

  std::string method_label_;
  FeatureMethod method_ = FeatureMethod::External;
  uint64_t digest_ = 0;
  uint32_t dim_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<float> values_;  // size() == ids_.size() * dim_
};

// Append-oriented binary writer used as the feature cache. Reopening an
// existing store keeps its records so extraction can resume.
class EmbeddingStoreWriter {
 public:
  EmbeddingStoreWriter(const std::filesystem::path& path, uint32_t dim);
  ~EmbeddingStoreWriter();

  EmbeddingStoreWriter(const EmbeddingStoreWriter&) = delete;
  EmbeddingStoreWriter& operator=(const EmbeddingStoreWriter&) = delete;

  bool contains(const std::string& image_id) const;
  size_t size() const { return present_.size(); }
  void append(const std::string& image_id, const std::vector<double>& values);
  void finalize();  // flushes and patches the record count

 private:
  std::filesystem::path path_;
  uint32_t dim_ = 0;
  uint32_t count_ = 0;
  bool dirty_ = false;
  std::unordered_map<std::string, bool> present_;
};

}  // namespace percept
