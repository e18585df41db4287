#include "sofic/parallel.hpp"

#include <omp.h>

namespace sofic {

  int max_threads() noexcept {
    return omp_get_max_threads();
  }

}  // namespace sofic
