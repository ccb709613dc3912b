#pragma once

#include <complex>
#include <vector>

namespace lapsim {

/// In-place complex DFT of arbitrary length: iterative radix-2 for powers
/// of two, Bluestein's chirp-z otherwise. Forward transform is
/// unnormalized; the inverse divides by n.
void fft(std::vector<std::complex<double>>& data, bool inverse);

/// Row-major 2-D DFT (rows then columns). Same normalization convention.
void fft_2d(std::vector<std::complex<double>>& data, int height, int width,
            bool inverse);

} // namespace lapsim
