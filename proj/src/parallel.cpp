#include "isde/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace isde {

int
worker_count()
{
  if (const char* env = std::getenv("ISDE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0)
        return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

} // namespace isde
