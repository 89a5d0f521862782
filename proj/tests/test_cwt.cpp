#include "msa/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "msa/errors.hpp"
#include "msa/numeric.hpp"
#include "support/oracles.hpp"

using namespace msa;
using namespace msa::cwt;

namespace {

std::vector<double> centered(std::vector<double> x) {
    const double m = num::mean(x);
    for (double& v : x) v -= m;
    return x;
}

std::vector<double> cosine(std::size_t n, double period, double amplitude = 1.0) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = amplitude * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / period);
    }
    return centered(std::move(x));
}

const ScaleGrid kDefaultGrid = ScaleGrid::make(2.0, 1.0 / 12.0, 128.0);

}  // namespace

TEST_CASE("fourier wavelength follows the Morlet dispersion") {
    CHECK(fourier_wavelength(1.0) == doctest::Approx(1.03).epsilon(0.005));
    CHECK(fourier_wavelength(10.0) / 10.0 == doctest::Approx(1.03).epsilon(0.005));
    CHECK(scale_for_wavelength(fourier_wavelength(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("scale grid is geometric and strictly increasing") {
    const auto scales = kDefaultGrid.scales();
    REQUIRE(scales.size() == static_cast<std::size_t>(kDefaultGrid.count));
    CHECK(scales.front() == doctest::Approx(2.0));
    CHECK(scales.back() <= 128.0 * 1.0001);
    CHECK(scales.back() > 128.0 / std::exp2(1.0 / 12.0) * 0.9999);
    for (std::size_t i = 1; i < scales.size(); ++i) {
        CHECK(scales[i] > scales[i - 1]);
        CHECK(scales[i] / scales[i - 1] == doctest::Approx(std::exp2(1.0 / 12.0)).epsilon(1e-12));
    }
}

TEST_CASE("frequency-domain transform matches the time-domain sum") {
    const auto x = centered(oracles::white_noise(300, 909));
    const auto sc = morlet_cwt(x, kDefaultGrid);
    for (double target : {8.0, 16.0, 32.0}) {
        std::size_t si = 0;
        for (std::size_t i = 1; i < sc.scales.size(); ++i) {
            if (std::abs(sc.scales[i] - target) < std::abs(sc.scales[si] - target)) si = i;
        }
        const double s = sc.scales[si];
        for (std::size_t t = 0; t < x.size(); t += 17) {
            const auto expected = oracles::morlet_coefficient(x, t, s);
            const auto got = sc.coefficients[si][t];
            CHECK(std::abs(got - expected) < 1e-6 * (1.0 + std::abs(expected)));
        }
    }
}

TEST_CASE("zero series produces zero coefficients") {
    const std::vector<double> zeros(300, 0.0);
    const auto sc = morlet_cwt(zeros, kDefaultGrid);
    for (const auto& row : sc.coefficients) {
        for (const auto& c : row) CHECK(std::abs(c) == 0.0);
    }
}

TEST_CASE("morlet_cwt validates its inputs") {
    CHECK_THROWS_WITH_AS(morlet_cwt(std::vector<double>(300, 0.5), kDefaultGrid),
                         doctest::Contains("mean-subtracted"), Error);
    const auto x = centered(oracles::white_noise(300, 1));
    CHECK_THROWS_WITH_AS(morlet_cwt(x, ScaleGrid::make(1.0, 1.0 / 12.0, 64.0)),
                         doctest::Contains("GridTooFine"), Error);
    CHECK_THROWS_AS(morlet_cwt(centered(oracles::white_noise(300, 2)), kDefaultGrid,
                               ConvolutionMode::Periodic),
                    Error);  // 300 is not a power of two
}

TEST_CASE("global power of a pure cosine peaks at the Fourier-equivalent scale") {
    for (double period : {12.0, 24.0, 36.0}) {
        const auto sc = morlet_cwt(cosine(300, period), kDefaultGrid);
        const auto gp = global_power(sc, false);
        const auto arg = std::max_element(gp.power.begin(), gp.power.end()) - gp.power.begin();
        const double target = scale_for_wavelength(period);
        const double bin =
            std::log2(sc.scales[static_cast<std::size_t>(arg)] / target) / kDefaultGrid.dj;
        CHECK(std::abs(bin) <= 1.0);
    }
}

TEST_CASE("linearity of the transform") {
    const auto x = centered(oracles::white_noise(128, 11));
    const auto y = centered(oracles::white_noise(128, 12));
    std::vector<double> mix(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mix[i] = 2.0 * x[i] - 0.5 * y[i];
    const auto grid = ScaleGrid::make(2.0, 1.0 / 8.0, 32.0);
    const auto sx = morlet_cwt(x, grid);
    const auto sy = morlet_cwt(y, grid);
    const auto sm = morlet_cwt(mix, grid);
    for (std::size_t si = 0; si < sx.scales.size(); ++si) {
        for (std::size_t t = 0; t < x.size(); ++t) {
            const auto expected = 2.0 * sx.coefficients[si][t] - 0.5 * sy.coefficients[si][t];
            CHECK(std::abs(sm.coefficients[si][t] - expected) < 1e-8);
        }
    }
}

TEST_CASE("periodic mode is exactly shift covariant") {
    const auto x = centered(oracles::white_noise(256, 21));
    const std::size_t shift = 37;
    std::vector<double> shifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[(i + shift) % x.size()];
    const auto grid = ScaleGrid::make(2.0, 1.0 / 8.0, 64.0);
    const auto sa = morlet_cwt(x, grid, ConvolutionMode::Periodic);
    const auto sb = morlet_cwt(shifted, grid, ConvolutionMode::Periodic);
    for (std::size_t si = 0; si < sa.scales.size(); ++si) {
        for (std::size_t t = 0; t < x.size(); ++t) {
            const auto expected = sa.coefficients[si][(t + shift) % x.size()];
            CHECK(std::abs(sb.coefficients[si][t] - expected) < 1e-8);
        }
    }
}

TEST_CASE("coefficient magnitude decays below 1/e outside the cone of influence") {
    std::vector<double> impulse(301, 0.0);
    const std::size_t t0 = 150;
    impulse[t0] = 1.0;
    const auto x = centered(std::move(impulse));
    const auto sc = morlet_cwt(x, kDefaultGrid);
    for (std::size_t si = 0; si < sc.scales.size(); si += 6) {
        const double s = sc.scales[si];
        // below s = 4 the sampled wavelet is clipped at Nyquist and its
        // envelope decays a touch slower than the ideal Gaussian
        if (s < 4.0) continue;
        const double peak = std::abs(sc.coefficients[si][t0]);
        const auto efold = static_cast<std::size_t>(std::ceil(std::numbers::sqrt2 * s)) + 1;
        // keep the probe itself out of the boundary-effect zone, where the
        // centering offset's edge response drowns the impulse tail
        if (t0 + efold + static_cast<std::size_t>(2.0 * s) >= x.size()) continue;
        CHECK(std::abs(sc.coefficients[si][t0 + efold]) < peak / std::numbers::e);
        CHECK(std::abs(sc.coefficients[si][t0 - efold]) < peak / std::numbers::e);
    }
    for (std::size_t t = 0; t < sc.coi.size(); ++t) {
        CHECK(sc.coi[t] == doctest::Approx(sc.coi[sc.coi.size() - 1 - t]));
    }
}

TEST_CASE("white-noise global power is flat outside the cone of influence") {
    const std::size_t seeds = 100;
    std::vector<std::vector<double>> per_scale;
    for (std::size_t s = 0; s < seeds; ++s) {
        const auto x = centered(oracles::white_noise(300, 7000 + s));
        const auto sc = morlet_cwt(x, kDefaultGrid);
        const auto gp = global_power(sc, true);
        if (per_scale.empty()) per_scale.resize(gp.power.size());
        for (std::size_t si = 0; si < gp.power.size(); ++si) {
            if (!gp.empty[si]) per_scale[si].push_back(gp.power[si]);
        }
    }
    std::vector<double> medians;
    for (auto& v : per_scale) {
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        medians.push_back(v[v.size() / 2]);
    }
    std::vector<double> sorted = medians;
    std::sort(sorted.begin(), sorted.end());
    const double overall = sorted[sorted.size() / 2];
    for (double m : medians) CHECK(m <= 3.0 * overall);
}

TEST_CASE("two superposed tones give two local maxima") {
    std::vector<double> x(300);
    for (std::size_t t = 0; t < x.size(); ++t) {
        const auto td = static_cast<double>(t);
        x[t] = std::cos(2.0 * std::numbers::pi * td / 12.0) +
               std::cos(2.0 * std::numbers::pi * td / 36.0);
    }
    const auto sc = morlet_cwt(centered(std::move(x)), kDefaultGrid);
    const auto gp = global_power(sc, false);
    std::vector<std::size_t> maxima;
    for (std::size_t si = 1; si + 1 < gp.power.size(); ++si) {
        if (gp.power[si] > gp.power[si - 1] && gp.power[si] >= gp.power[si + 1]) {
            maxima.push_back(si);
        }
    }
    REQUIRE(maxima.size() >= 2);
    std::sort(maxima.begin(), maxima.end(),
              [&](std::size_t a, std::size_t b) { return gp.power[a] > gp.power[b]; });
    std::vector<double> peaks{gp.wavelengths[maxima[0]], gp.wavelengths[maxima[1]]};
    std::sort(peaks.begin(), peaks.end());
    CHECK(peaks[0] == doctest::Approx(12.0).epsilon(0.08));
    CHECK(peaks[1] == doctest::Approx(36.0).epsilon(0.08));
}

TEST_CASE("COI exclusion flags scales with no reliable samples") {
    const auto x = centered(oracles::white_noise(300, 3));
    const auto sc = morlet_cwt(x, kDefaultGrid);
    const auto gp = global_power(sc, true);
    const double max_coi = *std::max_element(sc.coi.begin(), sc.coi.end());
    bool any_empty = false;
    for (std::size_t si = 0; si < gp.power.size(); ++si) {
        const bool expect_empty = sc.scales[si] > max_coi;
        CHECK(static_cast<bool>(gp.empty[si]) == expect_empty);
        any_empty = any_empty || expect_empty;
    }
    CHECK(any_empty);  // the default grid tops out beyond a 300-month COI
}

TEST_CASE("band extraction unwraps a clean phase ramp on a pure tone") {
    const double period = 12.0;
    const auto sc = morlet_cwt(cosine(300, period), kDefaultGrid);
    const auto band = band_coefficients(sc, period);
    CHECK(fourier_wavelength(band.scale) == doctest::Approx(period).epsilon(0.05));
    const std::size_t lo = 60, hi = 240;
    const double slope = (band.phase[hi] - band.phase[lo]) / static_cast<double>(hi - lo);
    CHECK(slope == doctest::Approx(2.0 * std::numbers::pi / period).epsilon(0.05));
}

TEST_CASE("band extraction picks the nearer scale, ties toward the smaller") {
    const auto x = centered(oracles::white_noise(300, 5));
    const auto sc = morlet_cwt(x, kDefaultGrid);
    const double wl0 = fourier_wavelength(sc.scales[10]);
    const double wl1 = fourier_wavelength(sc.scales[11]);
    const auto nearer = band_coefficients(sc, wl0 + 0.25 * (wl1 - wl0));
    CHECK(nearer.scale_index == 10);
    const auto tie = band_coefficients(sc, 0.5 * (wl0 + wl1));
    CHECK(tie.scale_index == 10);
    CHECK_THROWS_WITH_AS(band_coefficients(sc, 1e4), doctest::Contains("OutOfGrid"), Error);
    CHECK_THROWS_AS(band_coefficients(sc, 0.5), Error);
}

TEST_CASE("cross spectrum of a series with itself has zero phase and squared power") {
    const auto x = centered(oracles::white_noise(300, 31));
    const auto sc = morlet_cwt(x, kDefaultGrid);
    const auto xs = cross_spectrum(sc, sc);
    for (std::size_t si = 0; si < sc.size_scale(); si += 9) {
        for (std::size_t t = 0; t < sc.size_time(); t += 13) {
            CHECK(xs.phase[si][t] == doctest::Approx(0.0));
            CHECK(std::abs(xs.values[si][t]) ==
                  doctest::Approx(std::norm(sc.coefficients[si][t])).epsilon(1e-12));
        }
    }
}

TEST_CASE("a quarter-period delay appears as a pi/2 phase lead") {
    const double period = 16.0;
    const std::size_t n = 320;
    std::vector<double> a(n), b(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto td = static_cast<double>(t);
        a[t] = std::cos(2.0 * std::numbers::pi * td / period);
        b[t] = std::cos(2.0 * std::numbers::pi * (td - period / 4.0) / period);  // b lags a
    }
    const auto sa = morlet_cwt(centered(std::move(a)), kDefaultGrid);
    const auto sb = morlet_cwt(centered(std::move(b)), kDefaultGrid);
    const auto xs = cross_spectrum(sa, sb);
    const auto band = band_coefficients(sa, period);
    const auto si = static_cast<std::size_t>(band.scale_index);
    for (std::size_t t = 100; t < 220; t += 10) {
        CHECK(xs.phase[si][t] == doctest::Approx(std::numbers::pi / 2.0).epsilon(0.05));
    }
}

TEST_CASE("cross spectrum conjugates under argument swap") {
    const auto x = centered(oracles::white_noise(256, 41));
    const auto y = centered(oracles::white_noise(256, 42));
    const auto grid = ScaleGrid::make(2.0, 1.0 / 8.0, 64.0);
    const auto sx = morlet_cwt(x, grid);
    const auto sy = morlet_cwt(y, grid);
    const auto ab = cross_spectrum(sx, sy);
    const auto ba = cross_spectrum(sy, sx);
    for (std::size_t si = 0; si < sx.size_scale(); si += 5) {
        for (std::size_t t = 0; t < sx.size_time(); t += 11) {
            CHECK(ab.values[si][t] == std::conj(ba.values[si][t]));
        }
    }
}

TEST_CASE("grid mismatch is rejected") {
    const auto x = centered(oracles::white_noise(256, 51));
    const auto g1 = ScaleGrid::make(2.0, 1.0 / 8.0, 64.0);
    const auto g2 = ScaleGrid::make(2.0, 1.0 / 12.0, 64.0);
    const auto s1 = morlet_cwt(x, g1);
    const auto s2 = morlet_cwt(x, g2);
    CHECK_THROWS_WITH_AS(cross_spectrum(s1, s2), doctest::Contains("GridMismatch"), Error);
    CHECK_THROWS_AS(coherence(s1, s2, 0.05, 0, 1), Error);
}

TEST_CASE("coherence of identical inputs is one everywhere") {
    const auto x = centered(oracles::white_noise(300, 61));
    const auto sc = morlet_cwt(x, kDefaultGrid);
    const auto map = coherence(sc, sc, 0.05, 0, 1);
    for (const auto& row : map.coherence) {
        for (double v : row) CHECK(v >= 1.0 - 1e-6);
    }
}

TEST_CASE("without smoothing the coherence ratio is identically one") {
    const auto x = centered(oracles::white_noise(300, 71));
    const auto y = centered(oracles::white_noise(300, 72));
    const auto sx = morlet_cwt(x, kDefaultGrid);
    const auto sy = morlet_cwt(y, kDefaultGrid);
    CoherenceOptions raw;
    raw.smoothing = false;
    const auto map = coherence(sx, sy, 0.05, 0, 1, raw);
    for (const auto& row : map.coherence) {
        for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("smoothed coherence of independent noise stays within bounds and below one") {
    const auto x = centered(oracles::white_noise(300, 81));
    const auto y = centered(oracles::white_noise(300, 82));
    const auto sx = morlet_cwt(x, kDefaultGrid);
    const auto sy = morlet_cwt(y, kDefaultGrid);
    const auto map = coherence(sx, sy, 0.05, 0, 1);
    double mean_coh = 0.0;
    std::size_t cells = 0;
    for (const auto& row : map.coherence) {
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-9);
            mean_coh += v;
            ++cells;
        }
    }
    CHECK(mean_coh / static_cast<double>(cells) < 0.9);  // the smoother is doing real work
}

TEST_CASE("significance grid is identical across worker counts") {
    const auto x = centered(oracles::ar1_series(128, 0.4, 91));
    const auto y = centered(oracles::ar1_series(128, 0.6, 92));
    const auto grid = ScaleGrid::make(2.0, 1.0 / 6.0, 32.0);
    const auto sx = morlet_cwt(x, grid);
    const auto sy = morlet_cwt(y, grid);
    CoherenceOptions one_thread;
    one_thread.threads = 1;
    CoherenceOptions four_threads;
    four_threads.threads = 4;
    const auto a = coherence(sx, sy, 0.05, 40, 12345, one_thread);
    const auto b = coherence(sx, sy, 0.05, 40, 12345, four_threads);
    CHECK(a.significant == b.significant);
    for (std::size_t si = 0; si < a.scale_thresholds.size(); ++si) {
        if (std::isfinite(a.scale_thresholds[si])) {
            CHECK(a.scale_thresholds[si] == b.scale_thresholds[si]);
        }
    }
}

TEST_CASE("explosive inputs are rejected by the AR(1) surrogate fit") {
    std::vector<double> x(300);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::pow(1.05, static_cast<double>(t));
    const double m = num::mean(x);
    for (double& v : x) v -= m;
    const auto sc = morlet_cwt(x, kDefaultGrid);
    CHECK_THROWS_WITH_AS(coherence(sc, sc, 0.05, 10, 1), doctest::Contains("NonStationaryFit"),
                         Error);
}
