#pragma once

#include <complex>

namespace hlc::detail {

/// In-place unnormalized 3-D DFT of an n*n*n complex array (row-major,
/// first index slowest).  forward uses the e^{-i x.xi} sign convention.
/// Deterministic for a fixed value of the HLC_THREADS environment variable.
void fft3(std::complex<double>* data, int n, bool forward);

}  // namespace hlc::detail
