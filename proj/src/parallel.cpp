#include "phasespace/parallel.hpp"

#include <omp.h>

#include "phasespace/errors.hpp"

namespace phasespace {

void set_thread_count(int threads) {
  require(threads >= 1, ErrorKind::InvalidArgument, "thread count must be >= 1");
  omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace phasespace
