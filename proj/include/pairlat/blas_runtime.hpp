#pragma once

namespace pairlat::blas {

/// Name of the BLAS compute kernel selected at load time ("unknown" when the
/// BLAS does not report one).
const char* kernel_name();

/// OpenBLAS 0.3.20 auto-selects a "Cooperlake" kernel on AVX512-BF16 CPUs whose
/// dense eigensolver results are wrong (residuals of order one). The kernel is
/// chosen once, when the library loads, so the only fix is to restart the
/// process with OPENBLAS_CORETYPE set. Call this first thing in main(); it
/// returns normally when no restart is needed or OPENBLAS_CORETYPE is already set.
void ensure_reliable_kernel(int argc, char** argv);

/// Pins BLAS-internal threading to `threads` (no-op without OpenBLAS).
void set_threads(int threads);

}  // namespace pairlat::blas
