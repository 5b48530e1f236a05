#include "teamnet/execution.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace teamnet {

void set_max_threads(int threads)
{
#ifdef _OPENMP
    if (threads > 0)
        omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace teamnet
