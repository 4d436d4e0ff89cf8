#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "fft.hpp"

using amc::cdouble;

namespace {

std::vector<cdouble> brute_dft(const std::vector<cdouble>& x, bool inverse) {
    const size_t n = x.size();
    std::vector<cdouble> out(n);
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    for (size_t k = 0; k < n; ++k) {
        long double re = 0.0L, im = 0.0L;
        for (size_t j = 0; j < n; ++j) {
            const long double ang = (inverse ? 1.0L : -1.0L) * two_pi *
                                    static_cast<long double>((k * j) % n) /
                                    static_cast<long double>(n);
            const long double c = cosl(ang), s = sinl(ang);
            re += x[j].real() * c - x[j].imag() * s;
            im += x[j].real() * s + x[j].imag() * c;
        }
        if (inverse) {
            re /= static_cast<long double>(n);
            im /= static_cast<long double>(n);
        }
        out[k] = cdouble(static_cast<double>(re), static_cast<double>(im));
    }
    return out;
}

std::vector<cdouble> random_signal(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cdouble> x(n);
    for (auto& v : x) v = cdouble(u(rng), u(rng));
    return x;
}

}  // namespace

TEST_CASE("fft matches brute-force DFT on power-of-two and odd sizes") {
    for (size_t n : {2u, 3u, 4u, 5u, 8u, 12u, 16u, 31u, 100u, 256u, 1000u, 4032u}) {
        const auto x = random_signal(n, 7000 + n);
        auto fwd = x;
        amc::fft(fwd, false);
        const auto oracle = brute_dft(x, false);
        double scale = 0.0, err = 0.0;
        for (size_t k = 0; k < n; ++k) {
            scale = std::max(scale, std::abs(oracle[k]));
            err = std::max(err, std::abs(fwd[k] - oracle[k]));
        }
        CHECK_MESSAGE(err <= 1e-8 * scale, "forward n=" << n << " err=" << err);

        auto inv = x;
        amc::fft(inv, true);
        const auto inv_oracle = brute_dft(x, true);
        err = 0.0;
        for (size_t k = 0; k < n; ++k)
            err = std::max(err, std::abs(inv[k] - inv_oracle[k]));
        CHECK_MESSAGE(err <= 1e-8, "inverse n=" << n << " err=" << err);
    }
}

TEST_CASE("fft inverse round trip restores the input") {
    for (size_t n : {4u, 27u, 128u, 1000u}) {
        const auto x = random_signal(n, 40 + n);
        auto y = x;
        amc::fft(y, false);
        amc::fft(y, true);
        double err = 0.0;
        for (size_t k = 0; k < n; ++k) err = std::max(err, std::abs(y[k] - x[k]));
        CHECK_MESSAGE(err < 1e-11, "n=" << n << " err=" << err);
    }
}

TEST_CASE("fft preserves energy (Parseval)") {
    for (size_t n : {16u, 100u, 1024u}) {
        const auto x = random_signal(n, 90 + n);
        auto y = x;
        amc::fft(y, false);
        double time_e = 0.0, freq_e = 0.0;
        for (const auto& v : x) time_e += std::norm(v);
        for (const auto& v : y) freq_e += std::norm(v);
        freq_e /= static_cast<double>(n);
        CHECK(std::fabs(time_e - freq_e) <= 1e-9 * time_e);
    }
}

TEST_CASE("fft_real matches complex transform and is conjugate-symmetric") {
    const size_t n = 512;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);

    const auto spec = amc::fft_real(x);
    std::vector<cdouble> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = cdouble(x[i], 0.0);
    amc::fft(z, false);
    for (size_t k = 0; k < n; ++k) CHECK(std::abs(spec[k] - z[k]) < 1e-12);
    for (size_t k = 1; k < n / 2; ++k) {
        CHECK(std::abs(spec[k] - std::conj(spec[n - k])) < 1e-9);
    }
}

TEST_CASE("fft trivial sizes are no-ops") {
    std::vector<cdouble> empty;
    amc::fft(empty, false);
    CHECK(empty.empty());
    std::vector<cdouble> one{cdouble(3.5, -2.0)};
    amc::fft(one, false);
    CHECK(one[0] == cdouble(3.5, -2.0));
    amc::fft(one, true);
    CHECK(one[0] == cdouble(3.5, -2.0));
}

TEST_CASE("fft of a bin-aligned tone concentrates in one bin") {
    const size_t n = 256;
    const size_t bin = 19;
    std::vector<cdouble> x(n);
    for (size_t i = 0; i < n; ++i) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(bin * i) /
                           static_cast<double>(n);
        x[i] = cdouble(std::cos(ang), std::sin(ang));
    }
    amc::fft(x, false);
    for (size_t k = 0; k < n; ++k) {
        if (k == bin) {
            CHECK(std::abs(x[k] - cdouble(static_cast<double>(n), 0.0)) < 1e-9);
        } else {
            CHECK(std::abs(x[k]) < 1e-9);
        }
    }
}
