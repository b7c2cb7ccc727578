#include "movcat/parallel.hpp"

#include <omp.h>

namespace movcat {

namespace {
    int configured = 0;
}

void set_thread_count(int n)
{
    configured = n > 0 ? n : 0;
    if (configured > 0)
        omp_set_num_threads(configured);
}

int thread_count() { return configured > 0 ? configured : omp_get_max_threads(); }

} // namespace movcat
