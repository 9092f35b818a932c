#include "hyperlc/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>

namespace hlc::detail {
namespace {

int configured_threads() {
    const char* env = std::getenv("HLC_THREADS");
    if (!env) return 1;
    int t = std::atoi(env);
    return t > 0 ? t : 1;
}

struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<int, bool>, fftw_plan> plans;
    bool threads_ready = false;

    fftw_plan get(int n, bool forward) {
        std::lock_guard<std::mutex> lock(mutex);
        auto key = std::make_pair(n, forward);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;

        if (!threads_ready) {
            int t = configured_threads();
            if (t > 1) {
                fftw_init_threads();
                fftw_plan_with_nthreads(t);
            }
            threads_ready = true;
        }
        // FFTW_ESTIMATE keeps planning deterministic; FFTW_UNALIGNED lets the
        // plan run on any caller buffer via fftw_execute_dft.
        fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n * n);
        fftw_plan p = fftw_plan_dft_3d(n, n, n, buf, buf,
                                       forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft3(std::complex<double>* data, int n, bool forward) {
    fftw_plan p = cache().get(n, forward);
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, raw, raw);
}

}  // namespace hlc::detail
