#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace cyclocopula::detail {

namespace {
// FFTW planning is not thread-safe; execution of a finished plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> input, int sign) {
    const int n = static_cast<int>(input.size());
    std::vector<std::complex<double>> out(input.size());
    if (n == 0) {
        return out;
    }
    std::vector<std::complex<double>> in(input.begin(), input.end());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        throw std::runtime_error("fftw planning failed");
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace cyclocopula::detail
