#pragma once

#include <stdexcept>
#include <string>

namespace fc2n {

// Element type for the whole build. Verification builds use double so that
// finite-difference gradient checks have enough headroom; training builds
// may flip to float with -DFC2N_SINGLE_PRECISION=ON.
#ifdef FC2N_SINGLE
using real = float;
#else
using real = double;
#endif

inline constexpr bool kDoublePrecision = sizeof(real) == 8;

// Error taxonomy. The C API maps these onto status codes, the CLI onto
// exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor/image dimension mismatch.
struct ShapeError : Error {
  using Error::Error;
};

// Invalid argument value (empty list, r < 1, even kernel, ...).
struct ArgError : Error {
  using Error::Error;
};

// Bad run configuration (unknown key, unsupported scale, ...).
struct ConfigError : Error {
  using Error::Error;
};

// File open/read/write failure.
struct IoError : Error {
  using Error::Error;
};

// Malformed file contents (bad magic, version, depth, truncation).
struct FormatError : Error {
  using Error::Error;
};

// Training aborted (non-finite loss).
struct TrainAbort : Error {
  using Error::Error;
};

// Worker cap shared by all internally parallel ops. Resolved once from the
// FC2N_THREADS environment variable, default: hardware concurrency.
int thread_count();

}  // namespace fc2n
