#include "lavlab/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lavlab/common.hpp"

namespace lavlab {

WarningLog& WarningLog::instance() {
  static WarningLog log;
  return log;
}

void WarningLog::add(std::string msg) {
  std::lock_guard<std::mutex> lock(mu_);
  messages_.push_back(std::move(msg));
}

std::vector<std::string> WarningLog::drain() {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  out.swap(messages_);
  return out;
}

std::size_t WarningLog::count() {
  std::lock_guard<std::mutex> lock(mu_);
  return messages_.size();
}

void warn(std::string msg) { WarningLog::instance().add(std::move(msg)); }

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("LAVLAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double ordered_sum(const std::vector<double>& buf) {
  double s = 0.0;
  for (double v : buf) s += v;
  return s;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t item) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (item + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lavlab
