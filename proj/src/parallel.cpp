// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/parallel.hpp"

#ifdef COMPOSER_HAVE_OPENMP
#include <omp.h>
#endif

namespace composer {

int effective_threads(const ParallelConfig& cfg) {
  if (cfg.force_serial) return 1;
#ifdef COMPOSER_HAVE_OPENMP
  if (cfg.threads > 0) return cfg.threads;
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef COMPOSER_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace composer
