#include "fkdv/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fkdv::fft {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Twiddles for one power-of-two size: w[k] = exp(-2*pi*i*k/n), k < n/2.
struct Pow2Plan {
  int n{};
  std::vector<std::complex<double>> twiddle;
};

std::shared_ptr<const Pow2Plan> pow2_plan(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Pow2Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plan = std::make_shared<Pow2Plan>();
  plan->n = n;
  plan->twiddle.resize(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * kPi * k / n;
    plan->twiddle[k] = {std::cos(ang), std::sin(ang)};
  }
  cache.emplace(n, plan);
  return cache[n];
}

void fft_pow2(std::complex<double>* a, int n, bool inverse_transform) {
  const auto plan = pow2_plan(n);
  // bit-reversal permutation
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len >> 1;
    const int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < half; ++k) {
        std::complex<double> w = plan->twiddle[k * stride];
        if (inverse_transform) w = std::conj(w);
        const std::complex<double> even = a[i + k];
        const std::complex<double> odd = a[i + k + half] * w;
        a[i + k] = even + odd;
        a[i + k + half] = even - odd;
      }
    }
  }
}

// Bluestein data for one non-power-of-two size.
struct BluesteinPlan {
  int n{};
  int m{};                                        // pow2 convolution length >= 2n-1
  std::vector<std::complex<double>> chirp;        // exp(-i*pi*k^2/n)
  std::vector<std::complex<double>> kernel_spec;  // FFT of the chirp-conjugate kernel
};

std::shared_ptr<const BluesteinPlan> bluestein_plan(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const BluesteinPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plan = std::make_shared<BluesteinPlan>();
  plan->n = n;
  plan->m = next_pow2(2 * n - 1);
  plan->chirp.resize(n);
  for (int k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for large k
    const long long q = (static_cast<long long>(k) * k) % (2LL * n);
    const double ang = -kPi * static_cast<double>(q) / n;
    plan->chirp[k] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<std::complex<double>> kernel(plan->m, {0.0, 0.0});
  kernel[0] = std::conj(plan->chirp[0]);
  for (int k = 1; k < n; ++k) {
    kernel[k] = std::conj(plan->chirp[k]);
    kernel[plan->m - k] = std::conj(plan->chirp[k]);
  }
  fft_pow2(kernel.data(), plan->m, false);
  plan->kernel_spec = std::move(kernel);
  cache.emplace(n, plan);
  return cache[n];
}

void fft_bluestein(std::complex<double>* a, int n) {
  const auto plan = bluestein_plan(n);
  std::vector<std::complex<double>> buf(plan->m, {0.0, 0.0});
  for (int k = 0; k < n; ++k) buf[k] = a[k] * plan->chirp[k];
  fft_pow2(buf.data(), plan->m, false);
  for (int k = 0; k < plan->m; ++k) buf[k] *= plan->kernel_spec[k];
  fft_pow2(buf.data(), plan->m, true);
  const double scale = 1.0 / plan->m;
  for (int k = 0; k < n; ++k) a[k] = buf[k] * scale * plan->chirp[k];
}

void dft(std::complex<double>* a, int n, bool inverse_transform) {
  if (n <= 1) return;
  if (inverse_transform) {
    for (int k = 0; k < n; ++k) a[k] = std::conj(a[k]);
  }
  if (is_pow2(n)) {
    fft_pow2(a, n, false);
  } else {
    fft_bluestein(a, n);
  }
  if (inverse_transform) {
    const double scale = 1.0 / n;
    for (int k = 0; k < n; ++k) a[k] = std::conj(a[k]) * scale;
  }
}

}  // namespace

void forward_inplace(Eigen::ArrayXcd& data) {
  dft(data.data(), static_cast<int>(data.size()), false);
}

void inverse_inplace(Eigen::ArrayXcd& data) {
  dft(data.data(), static_cast<int>(data.size()), true);
}

Eigen::ArrayXcd forward(const Eigen::ArrayXcd& data) {
  Eigen::ArrayXcd out = data;
  forward_inplace(out);
  return out;
}

Eigen::ArrayXcd inverse(const Eigen::ArrayXcd& data) {
  Eigen::ArrayXcd out = data;
  inverse_inplace(out);
  return out;
}

Eigen::ArrayXcd forward_real(const Eigen::ArrayXd& data) {
  Eigen::ArrayXcd out = data.cast<std::complex<double>>();
  forward_inplace(out);
  return out;
}

}  // namespace fkdv::fft
