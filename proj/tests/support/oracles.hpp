#pragma once

// Independent reference implementations used to pin expected test values.
// These stay deliberately naive (quadratic sums, explicit matrices) so they
// check the optimized library paths from a different angle.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "msa/numeric.hpp"

namespace oracles {

/// O(n^2) discrete Fourier transform.
inline std::vector<std::complex<double>> direct_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(t) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

/// Fractional Gaussian noise by Davies-Harte circulant embedding.
inline std::vector<double> fgn(std::size_t n, double hurst, std::uint64_t seed) {
    const std::size_t m = msa::num::next_power_of_two(2 * n);
    std::vector<double> gamma(m / 2 + 1);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const auto kd = static_cast<double>(k);
        gamma[k] = 0.5 * (std::pow(kd + 1.0, 2.0 * hurst) - 2.0 * std::pow(kd, 2.0 * hurst) +
                          std::pow(std::abs(kd - 1.0), 2.0 * hurst));
    }
    std::vector<std::complex<double>> circ(m);
    for (std::size_t k = 0; k <= m / 2; ++k) circ[k] = gamma[k];
    for (std::size_t k = m / 2 + 1; k < m; ++k) circ[k] = gamma[m - k];
    msa::num::fft(circ);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::complex<double>> z(m);
    for (auto& v : z) v = {gauss(rng), gauss(rng)};
    for (std::size_t k = 0; k < m; ++k) {
        const double lambda = std::max(0.0, circ[k].real());
        z[k] *= std::sqrt(lambda);
    }
    msa::num::fft(z);
    std::vector<double> out(n);
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(m));
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i].real() * scale;
    return out;
}

/// Morlet CWT coefficient by the plain time-domain sum with the unit-energy
/// daughter: W_n(s) = sum_m x_m (1/sqrt(s)) conj(psi((m - n)/s)).
inline std::complex<double> morlet_coefficient(const std::vector<double>& x, std::size_t n,
                                               double s, double omega0 = 6.0) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t m = 0; m < x.size(); ++m) {
        const double t = (static_cast<double>(m) - static_cast<double>(n)) / s;
        const double env = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
        // conj(psi(t)) = pi^(-1/4) exp(-i w0 t) exp(-t^2/2)
        acc += x[m] * std::complex<double>(env * std::cos(omega0 * t), -env * std::sin(omega0 * t));
    }
    return acc / std::sqrt(s);
}

/// Dense orthogonal DWT analysis matrix for the periodic mode (even n):
/// row k is the lowpass (k < n/2) or highpass (k >= n/2) filter placed at
/// offset 2k+1-j mod n, mirroring the library's indexing.
inline std::vector<std::vector<double>> periodic_dwt_matrix(std::size_t n,
                                                            const std::array<double, 4>& lo,
                                                            const std::array<double, 4>& hi) {
    std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        for (int j = 0; j < 4; ++j) {
            long idx = (2 * static_cast<long>(k) + 1 - j) % static_cast<long>(n);
            if (idx < 0) idx += static_cast<long>(n);
            mat[k][static_cast<std::size_t>(idx)] += lo[static_cast<std::size_t>(j)];
            mat[half + k][static_cast<std::size_t>(idx)] += hi[static_cast<std::size_t>(j)];
        }
    }
    return mat;
}

/// Random AR(1) series with standard-normal innovations.
inline std::vector<double> ar1_series(std::size_t n, double coeff, std::uint64_t seed,
                                      double innovation_sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, innovation_sd);
    std::vector<double> x(n);
    x[0] = gauss(rng);
    for (std::size_t t = 1; t < n; ++t) x[t] = coeff * x[t - 1] + gauss(rng);
    return x;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        acc += gauss(rng);
        x[t] = acc;
    }
    return x;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sd);
    std::vector<double> x(n);
    for (auto& v : x) v = gauss(rng);
    return x;
}

}  // namespace oracles
