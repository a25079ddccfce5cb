#include "gmon/execution.hpp"

#ifdef GMON_HAVE_OPENMP
#include <omp.h>
#endif

namespace gmon {

void set_worker_count(int n) {
#ifdef GMON_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int worker_count() {
#ifdef GMON_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gmon
