#include "cli/commands.hpp"
#include "pairlat/blas_runtime.hpp"

int main(int argc, char** argv) {
  pairlat::blas::ensure_reliable_kernel(argc, argv);
  // Parallelism comes from independent diagonalizations; a single BLAS thread
  // keeps each one bitwise reproducible.
  pairlat::blas::set_threads(1);
  return pairlat::cli::run(argc, argv);
}
