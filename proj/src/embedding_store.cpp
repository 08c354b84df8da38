#include "percept/embedding_store.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "percept/error.hpp"
#include "percept/rng.hpp"

namespace percept {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

uint32_t read_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void write_u32le(std::ostream& out, uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void write_u16le(std::ostream& out, uint16_t v) {
  const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(bytes, 2);
}

float read_f32le(const uint8_t* p) {
  const uint32_t bits = read_u32le(p);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

void write_f32le(std::ostream& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  write_u32le(out, bits);
}

}  // namespace

EmbeddingStore EmbeddingStore::open(const std::filesystem::path& path,
                                    const std::string& method_label) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open store " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());

  EmbeddingStore store;
  store.method_label_ = method_label;
  store.method_ = parse_method(method_label);
  store.digest_ = fnv1a64("store|" + method_label);

  if (bytes.size() >= 12 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
    store.dim_ = read_u32le(bytes.data() + 4);
    const uint32_t count = read_u32le(bytes.data() + 8);
    require(store.dim_ > 0, Errc::corrupt_record, "store header dim is zero");
    size_t off = 12;
    store.values_.reserve(static_cast<size_t>(count) * store.dim_);
    for (uint32_t r = 0; r < count; ++r) {
      require(off + 2 <= bytes.size(), Errc::corrupt_record,
              "truncated record header at record " + std::to_string(r));
      const uint16_t id_len = static_cast<uint16_t>(bytes[off] | (bytes[off + 1] << 8));
      off += 2;
      require(id_len > 0 && off + id_len <= bytes.size(), Errc::corrupt_record,
              "truncated id at record " + std::to_string(r));
      std::string id(reinterpret_cast<const char*>(bytes.data() + off), id_len);
      off += id_len;
      require(off + static_cast<size_t>(store.dim_) * 4 <= bytes.size(), Errc::dim_mismatch,
              "record '" + id + "' shorter than header dim");
      require(!store.index_.contains(id), Errc::corrupt_record, "duplicate id '" + id + "'");
      store.index_.emplace(id, store.ids_.size());
      store.ids_.push_back(std::move(id));
      for (uint32_t i = 0; i < store.dim_; ++i) {
        const float v = read_f32le(bytes.data() + off + static_cast<size_t>(i) * 4);
        require(std::isfinite(v), Errc::corrupt_record, "non-finite value in record");
        store.values_.push_back(v);
      }
      off += static_cast<size_t>(store.dim_) * 4;
    }
    return store;
  }

  // CSV variant: id,v0,...,v{dim-1}; dim fixed by the first line
  std::string text(bytes.begin(), bytes.end());
  std::istringstream lines(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id;
    require(static_cast<bool>(std::getline(fields, id, ',')), Errc::corrupt_record,
            "line " + std::to_string(line_no) + ": missing id");
    std::vector<float> row;
    std::string tok;
    while (std::getline(fields, tok, ',')) {
      try {
        row.push_back(std::stof(tok));
      } catch (const std::exception&) {
        fail(Errc::corrupt_record,
             "line " + std::to_string(line_no) + ": bad value '" + tok + "'");
      }
      require(std::isfinite(row.back()), Errc::corrupt_record,
              "line " + std::to_string(line_no) + ": non-finite value");
    }
    require(!row.empty(), Errc::corrupt_record,
            "line " + std::to_string(line_no) + ": no values");
    if (store.dim_ == 0) store.dim_ = static_cast<uint32_t>(row.size());
    require(row.size() == store.dim_, Errc::dim_mismatch,
            "line " + std::to_string(line_no) + ": expected " + std::to_string(store.dim_) +
                " values, got " + std::to_string(row.size()));
    require(!store.index_.contains(id), Errc::corrupt_record, "duplicate id '" + id + "'");
    store.index_.emplace(id, store.ids_.size());
    store.ids_.push_back(id);
    store.values_.insert(store.values_.end(), row.begin(), row.end());
  }
  require(store.dim_ > 0, Errc::corrupt_record, "store " + path.string() + " is empty");
  return store;
}

bool EmbeddingStore::contains(const std::string& image_id) const {
  return index_.contains(image_id);
}

FeatureVector EmbeddingStore::get(const std::string& image_id) const {
  auto it = index_.find(image_id);
  require(it != index_.end(), Errc::unknown_image_id, "no record for '" + image_id + "'");
  FeatureVector fv;
  fv.method = method_;
  if (method_ == FeatureMethod::External) fv.external_name = method_label_;
  fv.params_digest = digest_;
  const float* base = values_.data() + it->second * dim_;
  fv.values.assign(base, base + dim_);
  return fv;
}

EmbeddingStoreWriter::EmbeddingStoreWriter(const std::filesystem::path& path, uint32_t dim)
    : path_(path), dim_(dim) {
  require(dim > 0, Errc::bad_config, "store dim must be positive");
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    const auto existing = EmbeddingStore::open(path, "resume");
    require(existing.dim() == dim, Errc::dim_mismatch,
            "existing store " + path.string() + " has dim " + std::to_string(existing.dim()) +
                ", expected " + std::to_string(dim));
    for (const auto& id : existing.ids()) present_.emplace(id, true);
    count_ = static_cast<uint32_t>(existing.size());
  } else {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::io_error, "cannot create store " + path.string());
    out.write(kMagic, 4);
    write_u32le(out, dim_);
    write_u32le(out, 0);
    require(out.good(), Errc::io_error, "write failed for " + path.string());
  }
}

EmbeddingStoreWriter::~EmbeddingStoreWriter() {
  try {
    finalize();
  } catch (...) {
  }
}

bool EmbeddingStoreWriter::contains(const std::string& image_id) const {
  return present_.contains(image_id);
}

void EmbeddingStoreWriter::append(const std::string& image_id, const std::vector<double>& values) {
  require(values.size() == dim_, Errc::dim_mismatch,
          "vector dim " + std::to_string(values.size()) + " != store dim " +
              std::to_string(dim_));
  require(!image_id.empty() && image_id.size() <= 0xffff, Errc::bad_config,
          "image id length out of range");
  require(!present_.contains(image_id), Errc::corrupt_record,
          "id '" + image_id + "' already present");
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  require(out.good(), Errc::io_error, "cannot append to " + path_.string());
  write_u16le(out, static_cast<uint16_t>(image_id.size()));
  out.write(image_id.data(), static_cast<std::streamsize>(image_id.size()));
  for (double v : values) write_f32le(out, static_cast<float>(v));
  require(out.good(), Errc::io_error, "append failed for " + path_.string());
  present_.emplace(image_id, true);
  ++count_;
  dirty_ = true;
}

void EmbeddingStoreWriter::finalize() {
  if (!dirty_) return;
  std::fstream out(path_, std::ios::binary | std::ios::in | std::ios::out);
  require(out.good(), Errc::io_error, "cannot reopen " + path_.string());
  out.seekp(8);
  write_u32le(out, count_);
  require(out.good(), Errc::io_error, "count patch failed for " + path_.string());
  dirty_ = false;
}

}  // namespace percept
