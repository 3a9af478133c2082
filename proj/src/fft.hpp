#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cyclocopula::detail {

/// Unnormalized DFT with kernel exp(sign * 2*pi*i*j*k/n), sign = +1 or -1.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> input, int sign);

} // namespace cyclocopula::detail
