#include "fft.hpp"

#include <cmath>
#include <numbers>

namespace amc {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

// Iterative radix-2, n must be a power of two.
void fft_pow2(std::vector<cdouble>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const cdouble wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cdouble u = a[i + k];
                cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& v : a)
            v *= inv;
    }
}

// Bluestein chirp-z transform: DFT of arbitrary length via a
// power-of-two convolution.
void fft_bluestein(std::vector<cdouble>& a, bool inverse) {
    const size_t n = a.size();
    const size_t m = next_pow2(2 * n - 1);
    std::vector<cdouble> chirp(n);
    for (size_t k = 0; k < n; ++k) {
        // angle = pi * k^2 / n, reduced mod 2n to keep the argument small
        const unsigned long long k2 = (static_cast<unsigned long long>(k) * k) %
                                      (2ull * n);
        const double ang = kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cdouble(std::cos(ang), (inverse ? 1.0 : -1.0) * std::sin(ang));
    }
    std::vector<cdouble> x(m, cdouble(0.0, 0.0));
    std::vector<cdouble> y(m, cdouble(0.0, 0.0));
    for (size_t k = 0; k < n; ++k)
        x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (size_t k = 1; k < n; ++k)
        y[k] = y[m - k] = std::conj(chirp[k]);
    fft_pow2(x, false);
    fft_pow2(y, false);
    for (size_t k = 0; k < m; ++k)
        x[k] *= y[k];
    fft_pow2(x, true);
    for (size_t k = 0; k < n; ++k)
        a[k] = x[k] * chirp[k];
    if (inverse) {
        const double invn = 1.0 / static_cast<double>(n);
        for (auto& v : a)
            v *= invn;
    }
}

}  // namespace

void fft(std::vector<cdouble>& data, bool inverse) {
    if (data.empty())
        return;
    if (data.size() == 1)
        return;
    if (is_pow2(data.size()))
        fft_pow2(data, inverse);
    else
        fft_bluestein(data, inverse);
}

std::vector<cdouble> fft_real(const std::vector<double>& x) {
    std::vector<cdouble> a(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        a[i] = cdouble(x[i], 0.0);
    fft(a, false);
    return a;
}

}  // namespace amc
