#include "maglab/common.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maglab {

namespace {

// The sweeps parallelize outside BLAS; nested BLAS threads only oversubscribe
// and perturb reproducibility. Respect an explicit user setting.
struct BlasThreadPin {
    BlasThreadPin() { setenv("OPENBLAS_NUM_THREADS", "1", 0); }
};
const BlasThreadPin blas_thread_pin;

}  // namespace

void par_for(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error;
    std::size_t first_index = n;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace maglab
