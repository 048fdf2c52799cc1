#pragma once

#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lavlab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Malformed configs, schemas, invalid arguments. CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation that cannot proceed numerically. CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (e.g. a grid too coarse for the requested mollification
// radius) are collected here instead of being printed mid-computation.
class WarningLog {
 public:
  static WarningLog& instance();

  void add(std::string msg);
  std::vector<std::string> drain();
  std::size_t count();

 private:
  std::mutex mu_;
  std::vector<std::string> messages_;
};

void warn(std::string msg);

}  // namespace lavlab
