#pragma once

namespace teamnet {

// Selects between the OpenMP kernel and the serial reference path. Both
// produce identical results; the serial path is kept for testing and
// benchmarking.
enum class Execution { Serial, Parallel };

// Caps the OpenMP team size; 0 leaves the runtime default in place.
void set_max_threads(int threads);
int max_threads();

} // namespace teamnet
