#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "synth.hpp"

namespace amc {

// Unnormalized forward DFT of a waveform plus the carrier bin index
// used by the spectrum-symmetry feature.
struct Spectrum {
    std::vector<std::complex<double>> bins;
    double sample_rate = 0.0;
    size_t length = 0;        // N
    long carrier_bin = 0;     // fcn = round(fc*N/fs - 1)
};

Spectrum dft(const Waveform& w);

// Analytic signal via the frequency-domain Hilbert method: zero the
// negative-frequency bins, double the positive ones, keep DC and
// Nyquist. Odd-length input is zero-padded by one sample internally;
// the returned sequence has the input's length either way.
std::vector<std::complex<double>> analytic_signal(const Waveform& w);

// Per-sample instantaneous values derived from the analytic signal.
// All sequences are stored after edge trimming; statistics downstream
// never see the trimmed-off Hilbert transients.
struct InstantaneousSeries {
    std::vector<double> amplitude;        // a[n] = |z[n]|
    std::vector<double> amplitude_norm;   // an[n] = a[n]/ma
    std::vector<double> amplitude_cn;     // acn[n] = an[n] - 1
    std::vector<double> phase_unwrapped;  // phi[n], +-2pi-corrected
    std::vector<double> phase_nl;         // carrier-removed phase, mean-removed
    std::vector<double> freq;             // f[n], Hz
    std::vector<double> freq_cn;          // fN[n] = (f[n] - mean f)/fs
    std::vector<uint8_t> mask;            // an[n] > At
    double mean_amplitude = 0.0;          // ma
    double threshold = 0.0;               // At
    size_t masked_count = 0;              // Nc
    size_t edge_trim = 0;                 // samples dropped per end
    double sample_rate = 0.0;

    size_t size() const { return amplitude.size(); }
};

struct InstantaneousConfig {
    double amp_threshold = 1.0;  // At, applied to an[n]
    size_t edge_trim = 32;       // E, per end
};

InstantaneousSeries instantaneous(const Waveform& w, double carrier,
                                  const InstantaneousConfig& cfg = {});

// Wraps an angle into [-pi/2, 3pi/2), the period centered on the
// {0, pi} cluster pair so neither PSK phase state straddles the seam.
double wrap_phase_cluster(double phi);

}  // namespace amc
