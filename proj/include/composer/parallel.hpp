// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

namespace composer {

/// Controls the OpenMP kernels. threads == 0 means "use what the runtime
/// offers"; force_serial pins the serial reference path regardless of
/// build flags, which tests and the kernel benchmark rely on.
struct ParallelConfig {
  int threads = 0;
  bool force_serial = false;

  static ParallelConfig serial() { return {0, true}; }
};

/// Number of worker threads the kernels will actually use.
int effective_threads(const ParallelConfig& cfg);

/// True when the build has OpenMP support compiled in.
bool openmp_enabled();

}  // namespace composer
