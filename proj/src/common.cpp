#include "common.hpp"

#include <cstdlib>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fc2n {

static int resolve_thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("FC2N_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<int>(v);
  }
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
  return n;
}

int thread_count() {
  static int n = resolve_thread_count();
  return n;
}

}  // namespace fc2n
