#pragma once

#include <Eigen/Core>

#include <complex>

namespace fkdv::fft {

/// In-place DFT of arbitrary length, X_k = sum_j x_j exp(-2*pi*i*j*k/n).
/// Power-of-two lengths run iterative Cooley-Tukey; anything else goes
/// through a Bluestein chirp transform. Plans (twiddles, chirp spectra)
/// are cached per length behind a mutex, so concurrent callers are safe.
void forward_inplace(Eigen::ArrayXcd& data);

/// Inverse of forward_inplace, including the 1/n scale.
void inverse_inplace(Eigen::ArrayXcd& data);

Eigen::ArrayXcd forward(const Eigen::ArrayXcd& data);
Eigen::ArrayXcd inverse(const Eigen::ArrayXcd& data);

Eigen::ArrayXcd forward_real(const Eigen::ArrayXd& data);

}  // namespace fkdv::fft
