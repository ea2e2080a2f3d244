#pragma once

namespace depbound {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both produce the same results; the serial path exists for testing and
/// benchmarking.
enum class Exec { Serial, Parallel };

/// Sets the OpenMP worker count (no-op without OpenMP). Values < 1 keep the
/// runtime default.
void set_threads(int threads);
int max_threads();

}  // namespace depbound
