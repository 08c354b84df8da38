#pragma once

#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <string>

#include "percept/error.hpp"

// asserts both the exception type and the spec'd error code
#define CHECK_THROWS_CODE(expr, errc)                      \
  do {                                                     \
    bool thrown_ = false;                                  \
    try {                                                  \
      (void)(expr);                                        \
    } catch (const percept::Error& e_) {                   \
      thrown_ = true;                                      \
      CHECK(e_.code() == (errc));                          \
    }                                                      \
    CHECK_MESSAGE(thrown_, "expected " #expr " to throw"); \
  } while (0)

namespace percept::testing {

// unique scratch directory, removed on destruction
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("percept_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace percept::testing
