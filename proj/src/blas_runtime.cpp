#include "pairlat/blas_runtime.hpp"

#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <string_view>

#ifdef PAIRLAT_HAVE_OPENBLAS
extern "C" {
char* openblas_get_corename(void);
void openblas_set_num_threads(int num_threads);
}
#endif

namespace pairlat::blas {

const char* kernel_name() {
#ifdef PAIRLAT_HAVE_OPENBLAS
  return openblas_get_corename();
#else
  return "unknown";
#endif
}

void ensure_reliable_kernel(int /*argc*/, char** argv) {
#ifdef PAIRLAT_HAVE_OPENBLAS
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  if (std::string_view(kernel_name()) != "Cooperlake") return;
  ::setenv("OPENBLAS_CORETYPE", "SkylakeX", 1);
  ::execv("/proc/self/exe", argv);
  // execv only returns on failure; carry on with the loaded kernel and let
  // the residual checks report any damage.
#else
  (void)argv;
#endif
}

void set_threads(int threads) {
#ifdef PAIRLAT_HAVE_OPENBLAS
  openblas_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace pairlat::blas
