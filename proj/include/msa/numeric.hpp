#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace msa::num {

double mean(std::span<const double> x);

/// Sample variance (N-1 denominator). Requires n >= 2.
double variance(std::span<const double> x);

/// Population variance (N denominator).
double variance_pop(std::span<const double> x);

double stddev(std::span<const double> x);

double total_variation(std::span<const double> x);

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile (Acklam's rational approximation, |err| < 1.2e-9).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

double chi2_cdf(double x, double df);

/// Kolmogorov distribution complement Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// Linear quantile of a sorted vector (type-7 convention: interpolated order statistics).
double quantile_sorted(std::span<const double> sorted, double p);

/// Ordinary least squares slope/intercept of y on x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// FFT: iterative radix-2, in place. Length must be a power of two.
// ---------------------------------------------------------------------------

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

void fft(std::vector<std::complex<double>>& a);
void ifft(std::vector<std::complex<double>>& a);

// ---------------------------------------------------------------------------
// Deterministic seeding for Monte Carlo replicates: the stream for replicate
// i depends only on (master_seed, i), never on scheduling.
// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace msa::num
