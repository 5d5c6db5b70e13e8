#include "posmech/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace posmech {

namespace {
int g_threads = 0;
}

void set_num_threads(int n) { g_threads = n < 0 ? 0 : n; }

int num_threads() { return g_threads; }

int resolve_threads() {
#ifdef _OPENMP
    return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace posmech
