#include "msa/dwt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "msa/errors.hpp"
#include "msa/numeric.hpp"
#include "support/oracles.hpp"

using namespace msa;
using namespace msa::dwt;

TEST_CASE("db4 filters satisfy the admissibility identities") {
    const auto& f = db4();
    const double sum_lo = std::accumulate(f.lowpass.begin(), f.lowpass.end(), 0.0);
    const double sum_hi = std::accumulate(f.highpass.begin(), f.highpass.end(), 0.0);
    double norm_lo = 0.0, norm_hi = 0.0, dot = 0.0, moment_hi = 0.0;
    for (int k = 0; k < 4; ++k) {
        norm_lo += f.lowpass[k] * f.lowpass[k];
        norm_hi += f.highpass[k] * f.highpass[k];
        dot += f.lowpass[k] * f.highpass[k];
        moment_hi += k * f.highpass[k];
    }
    CHECK(sum_lo == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sum_hi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(norm_lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dot == doctest::Approx(0.0).epsilon(1e-12));
    // second vanishing moment: the highpass annihilates linear sequences
    CHECK(moment_hi == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("perfect reconstruction across lengths and modes") {
    std::mt19937_64 rng(404);
    std::normal_distribution<double> gauss;
    for (std::size_t n : {8u, 9u, 16u, 31u, 64u, 100u, 255u, 300u, 512u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = gauss(rng);
        for (const BoundaryMode mode : {BoundaryMode::Symmetric, BoundaryMode::Periodic}) {
            for (int level = 1; level <= 4; ++level) {
                WaveletPyramid pyr;
                try {
                    pyr = dwt_level(x, level, mode);
                } catch (const Error& e) {
                    // deep periodic levels on short series legitimately run out
                    CHECK(e.code() == ErrorCode::InsufficientData);
                    continue;
                }
                const auto back = reconstruct(pyr);
                REQUIRE(back.size() == n);
                for (std::size_t i = 0; i < n; ++i) {
                    CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("periodic coefficient counts halve with ceiling division") {
    std::vector<double> x(13, 1.0);
    std::vector<double> a, d;
    dwt_step(x, BoundaryMode::Periodic, a, d);
    CHECK(a.size() == 7);
    CHECK(d.size() == 7);
    std::vector<double> y(20, 1.0);
    dwt_step(y, BoundaryMode::Periodic, a, d);
    CHECK(a.size() == 10);
}

TEST_CASE("constant series produce zero details and scaled approximations") {
    const double c = 2.5;
    const std::vector<double> x(64, c);
    const auto pyr = dwt_level(x, 3, BoundaryMode::Periodic);
    for (const auto& d : pyr.details) {
        for (double v : d) CHECK(std::abs(v) < 1e-12);
    }
    // each level multiplies constants by sqrt(2)
    const double expected = c * std::pow(2.0, 1.5);
    for (double v : pyr.approx) CHECK(v == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("linear ramps are annihilated by the detail filters") {
    std::vector<double> ramp(128);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.7 * static_cast<double>(i) - 3.0;
    for (const BoundaryMode mode : {BoundaryMode::Symmetric, BoundaryMode::Periodic}) {
        const auto pyr = dwt_level(ramp, 3, mode);
        for (std::size_t j = 0; j < pyr.details.size(); ++j) {
            const auto& d = pyr.details[j];
            for (std::size_t i = 4; i + 4 < d.size(); ++i) {
                CHECK(std::abs(d[i]) < 1e-10);
            }
        }
    }
}

TEST_CASE("trend of a ramp is the ramp itself") {
    std::vector<double> ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 1.2 * static_cast<double>(i) + 5.0;
    for (int level = 1; level <= 4; ++level) {
        const auto trend = trend_reconstruct(ramp, level);
        for (std::size_t i = 0; i < ramp.size(); ++i) {
            CHECK(trend[i] == doctest::Approx(ramp[i]).epsilon(1e-8));
        }
        const auto fluct = fluctuations(ramp, level, false);
        for (double v : fluct) CHECK(std::abs(v) < 1e-8);
    }
}

TEST_CASE("pure alternation leaves almost no trend at level 1") {
    std::vector<double> x(128);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 == 0 ? 1.0 : -1.0;
    // the exact statement lives in the orthogonal periodic transform, where
    // the alternation is an eigen-signal of the highpass bank
    const auto periodic = trend_reconstruct(x, 1, BoundaryMode::Periodic);
    for (double v : periodic) CHECK(std::abs(v) < 1e-12);
    // the reflective analysis mode bends only near the ends
    const auto trend = trend_reconstruct(x, 1);
    for (std::size_t i = 8; i + 8 < trend.size(); ++i) CHECK(std::abs(trend[i]) < 0.1);
}

TEST_CASE("periodic analysis equals the dense orthogonal matrix") {
    const std::size_t n = 64;
    const auto x = oracles::white_noise(n, 51);
    std::vector<double> a, d;
    dwt_step(x, BoundaryMode::Periodic, a, d);
    const auto mat = oracles::periodic_dwt_matrix(n, db4().lowpass, db4().highpass);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ra = 0.0, rd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ra += mat[k][i] * x[i];
            rd += mat[n / 2 + k][i] * x[i];
        }
        CHECK(a[k] == doctest::Approx(ra).epsilon(1e-12));
        CHECK(d[k] == doctest::Approx(rd).epsilon(1e-12));
    }
    // Parseval through the full pyramid on a dyadic length
    const auto pyr = dwt_level(x, 3, BoundaryMode::Periodic);
    double energy = 0.0;
    for (const auto& lvl : pyr.details) {
        for (double v : lvl) energy += v * v;
    }
    for (double v : pyr.approx) energy += v * v;
    double input_energy = 0.0;
    for (double v : x) input_energy += v * v;
    CHECK(energy == doctest::Approx(input_energy).epsilon(1e-10));
}

TEST_CASE("decompose keeps trend plus fluctuation equal to the input") {
    TimeSeries series{oracles::white_noise(300, 67), {1986, 1}, "X"};
    const auto dec = decompose(series, 4, true);
    REQUIRE(dec.level_count == 4);
    for (int j = 0; j < 4; ++j) {
        for (std::size_t t = 0; t < series.size(); ++t) {
            const double sum = dec.trends[static_cast<std::size_t>(j)][t] +
                               dec.fluctuations[static_cast<std::size_t>(j)][t];
            CHECK(sum == doctest::Approx(series.values[t]).epsilon(1e-8));
        }
    }
}

TEST_CASE("symmetrized fluctuations of a palindrome are palindromic") {
    // The asymmetric Db-4 filter shifts plain fluctuations even on mirror
    // inputs; the reverse-profile average restores the symmetry exactly.
    std::vector<double> half = oracles::white_noise(64, 71);
    std::vector<double> x(half);
    x.insert(x.end(), half.rbegin(), half.rend());
    const auto sym = fluctuations(x, 2, true);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(sym[i] == doctest::Approx(sym[x.size() - 1 - i]).epsilon(1e-10));
    }
}

TEST_CASE("symmetrized fluctuations commute with reversal") {
    const auto x = oracles::white_noise(150, 73);
    std::vector<double> rev(x.rbegin(), x.rend());
    const auto f_fwd = fluctuations(x, 3, true);
    const auto f_rev = fluctuations(rev, 3, true);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(f_rev[x.size() - 1 - i] == doctest::Approx(f_fwd[i]).epsilon(1e-10));
    }
}

TEST_CASE("interior trend total variation does not grow with level on monotone inputs") {
    // boundary coefficients may add a sliver of variation; away from the
    // ends the coarser trend is never rougher
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> x(200);
        double acc = 0.0;
        for (auto& v : x) {
            acc += unif(rng);
            v = acc;
        }
        double prev_tv = -1.0;
        for (int level = 1; level <= 4; ++level) {
            const auto trend = trend_reconstruct(x, level);
            const auto trim = static_cast<std::size_t>(4) << level;
            const std::vector<double> mid(trend.begin() + static_cast<long>(trim),
                                          trend.end() - static_cast<long>(trim));
            const double tv = num::total_variation(mid);
            if (prev_tv >= 0.0) CHECK(tv <= prev_tv + 1e-9);
            prev_tv = tv;
        }
    }
}

TEST_CASE("trend variance is non-increasing in level for white noise (median study)") {
    const int seeds = 100;
    int monotone = 0;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries series{oracles::white_noise(300, 5000 + static_cast<unsigned>(s)),
                          {1986, 1},
                          "w"};
        const auto vars = variance_by_level(decompose(series, 4, true));
        bool ok = true;
        for (int j = 1; j < 4; ++j) {
            if (vars.trend[static_cast<std::size_t>(j)] >
                vars.trend[static_cast<std::size_t>(j - 1)] * 1.05) {
                ok = false;
            }
        }
        if (ok) ++monotone;
    }
    CHECK(monotone > seeds / 2);
}

TEST_CASE("variance_by_level on zeros and on a period-4 tone") {
    TimeSeries zeros{std::vector<double>(64, 0.0), {1986, 1}, "z"};
    const auto vz = variance_by_level(decompose(zeros, 3, false));
    for (double v : vz.trend) CHECK(v == doctest::Approx(0.0));
    for (double v : vz.fluctuation) CHECK(v == doctest::Approx(0.0));

    std::vector<double> tone(256);
    for (std::size_t i = 0; i < tone.size(); ++i) {
        tone[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 4.0);
    }
    TimeSeries ts{tone, {1986, 1}, "tone"};
    const auto vt = variance_by_level(decompose(ts, 4, false));
    // a 4-sample tone lives in the finest two levels: the level-2 fluctuation
    // bank already captures nearly all of its variance
    const double total = num::variance(tone);
    CHECK(vt.fluctuation[1] > 0.9 * total);
}

TEST_CASE("dwt_level rejects bad arguments") {
    CHECK_THROWS_AS(dwt_level(std::vector<double>{1, 2, 3}, 1), Error);
    CHECK_THROWS_AS(dwt_level(oracles::white_noise(16, 1), 0), Error);
    // 8 -> 4 -> 2 -> 1: the fourth periodic level cannot produce 2 coefficients
    CHECK_THROWS_WITH_AS(dwt_level(oracles::white_noise(8, 2), 4, BoundaryMode::Periodic),
                         doctest::Contains("InsufficientData"), Error);
}
