#pragma once

namespace affdim {

/// Selects between the serial reference kernels and the OpenMP kernels.
/// `threads == 0` leaves the worker count to the OpenMP runtime.
struct Exec {
  bool parallel = true;
  int threads = 0;

  static constexpr Exec serial() { return Exec{false, 1}; }
  static constexpr Exec with_threads(int n) { return Exec{true, n}; }
};

/// Worker count an OpenMP region launched with `exec` will use.
int resolved_threads(const Exec& exec);

}  // namespace affdim
