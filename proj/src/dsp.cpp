#include "dsp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"
#include "fft.hpp"

namespace amc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Spectrum dft(const Waveform& w) {
    if (w.samples.size() < 2)
        throw Error(ErrorCode::Shape, "dft: need at least 2 samples");
    Spectrum s;
    s.bins = fft_real(w.samples);
    s.sample_rate = w.sample_rate;
    s.length = w.samples.size();
    s.carrier_bin = std::lround(w.carrier * static_cast<double>(s.length) /
                                w.sample_rate - 1.0);
    return s;
}

std::vector<std::complex<double>> analytic_signal(const Waveform& w) {
    if (w.samples.size() < 2)
        throw Error(ErrorCode::Shape, "analytic_signal: need at least 2 samples");
    const size_t n_in = w.samples.size();
    std::vector<double> padded;
    const std::vector<double>* src = &w.samples;
    if (n_in % 2 != 0) {
        padded = w.samples;
        padded.push_back(0.0);
        src = &padded;
    }
    const size_t n = src->size();
    std::vector<cdouble> z(n);
    for (size_t i = 0; i < n; ++i)
        z[i] = cdouble((*src)[i], 0.0);
    fft(z, false);
    // H[0] and H[n/2] stay, positive bins double, negative bins vanish.
    for (size_t k = 1; k < n / 2; ++k)
        z[k] *= 2.0;
    for (size_t k = n / 2 + 1; k < n; ++k)
        z[k] = cdouble(0.0, 0.0);
    fft(z, true);
    z.resize(n_in);
    return z;
}

double wrap_phase_cluster(double phi) {
    return phi - kTwoPi * std::floor((phi + kPi / 2.0) / kTwoPi);
}

InstantaneousSeries instantaneous(const Waveform& w, double carrier,
                                  const InstantaneousConfig& cfg) {
    if (carrier != w.carrier)
        throw Error(ErrorCode::Argument,
                    "instantaneous: carrier does not match waveform metadata");
    const auto z = analytic_signal(w);
    const size_t n = z.size();
    const size_t trim = cfg.edge_trim;
    if (n < 2 * trim + 2)
        throw Error(ErrorCode::Shape, "instantaneous: waveform shorter than edge trim");

    // Unwrapped phase with the standard +-2pi correction on successive
    // differences.
    std::vector<double> phase(n);
    phase[0] = std::arg(z[0]);
    double prev = phase[0];
    double offset = 0.0;
    for (size_t i = 1; i < n; ++i) {
        const double raw = std::arg(z[i]);
        double d = raw - prev;
        if (d > kPi)
            offset -= kTwoPi;
        else if (d < -kPi)
            offset += kTwoPi;
        phase[i] = raw + offset;
        prev = raw;
    }

    // Instantaneous frequency by central difference of unwrapped phase.
    std::vector<double> freq(n, 0.0);
    const double fs = w.sample_rate;
    for (size_t i = 1; i + 1 < n; ++i)
        freq[i] = (phase[i + 1] - phase[i - 1]) * fs / (4.0 * kPi);

    const size_t usable = n - 2 * trim;
    InstantaneousSeries out;
    out.edge_trim = trim;
    out.sample_rate = fs;
    out.threshold = cfg.amp_threshold;
    out.amplitude.resize(usable);
    out.phase_unwrapped.resize(usable);
    out.phase_nl.resize(usable);
    out.freq.resize(usable);

    double amp_sum = 0.0;
    for (size_t i = 0; i < usable; ++i) {
        const size_t j = i + trim;
        out.amplitude[i] = std::abs(z[j]);
        amp_sum += out.amplitude[i];
        out.phase_unwrapped[i] = phase[j];
        // Remove the known-carrier linear phase; wrap the residue to one
        // period so symbol transitions cannot accumulate phase ramps.
        const double nl = phase[j] - kTwoPi * carrier *
                                         static_cast<double>(j) / fs;
        out.phase_nl[i] = wrap_phase_cluster(nl);
        out.freq[i] = freq[j];
    }
    out.mean_amplitude = amp_sum / static_cast<double>(usable);
    if (!(out.mean_amplitude > 0.0))
        throw Error(ErrorCode::Degenerate, "instantaneous: zero mean amplitude");

    double phase_sum = 0.0, freq_sum = 0.0;
    for (size_t i = 0; i < usable; ++i) {
        phase_sum += out.phase_nl[i];
        freq_sum += out.freq[i];
    }
    const double phase_mean = phase_sum / static_cast<double>(usable);
    const double freq_mean = freq_sum / static_cast<double>(usable);

    out.amplitude_norm.resize(usable);
    out.amplitude_cn.resize(usable);
    out.freq_cn.resize(usable);
    out.mask.resize(usable);
    out.masked_count = 0;
    for (size_t i = 0; i < usable; ++i) {
        out.amplitude_norm[i] = out.amplitude[i] / out.mean_amplitude;
        out.amplitude_cn[i] = out.amplitude_norm[i] - 1.0;
        out.phase_nl[i] -= phase_mean;
        out.freq_cn[i] = (out.freq[i] - freq_mean) / fs;
        const bool keep = out.amplitude_norm[i] > cfg.amp_threshold;
        out.mask[i] = keep ? 1 : 0;
        if (keep)
            ++out.masked_count;
    }
    if (out.masked_count == 0)
        throw Error(ErrorCode::EmptyMask,
                    "instantaneous: amplitude threshold At=" +
                        std::to_string(cfg.amp_threshold) +
                        " leaves no samples");
    return out;
}

}  // namespace amc
