#pragma once

// The data-parallel kernels (ball expansion, defect counting, regular
// representation images) come in two flavours: an OpenMP version and a plain
// serial loop kept as the reference implementation.  Both must produce
// bit-identical results; the tests compare them and bench/ times them.

namespace sofic {

  enum class Execution { serial, parallel };

  int max_threads() noexcept;

}  // namespace sofic
