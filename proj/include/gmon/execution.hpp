#pragma once

namespace gmon {

// Serial is the reference path; parallel distributes independent
// replications over OpenMP threads and must produce identical results.
enum class Execution { serial, parallel };

// Sets the OpenMP worker count for parallel execution (no-op without
// OpenMP). n <= 0 leaves the runtime default.
void set_worker_count(int n);
int worker_count();

}  // namespace gmon
