#pragma once

namespace movcat {

/// Every kernel that loops over independent objects takes one of these. The
/// serial path is the reference implementation; both produce identical output.
enum class Execution { serial, parallel };

/// Threads used by parallel kernels; 0 means the OpenMP default.
void set_thread_count(int n);
int thread_count();

} // namespace movcat
