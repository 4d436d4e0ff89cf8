#pragma once

#include <cstdint>
#include <vector>

#include "scheme.hpp"

namespace amc {

// Generation parameters shared by all schemes. Defaults keep every
// sideband of every scheme well inside the Nyquist band and give
// about 40 symbols per realization.
struct SynthConfig {
    double sample_rate = 100000.0;   // fs, Hz
    double carrier = 25000.0;        // fc, Hz
    double message_freq = 1000.0;    // fm, Hz (analog message tone)
    size_t num_samples = 4096;       // N
    double am_depth = 0.5;           // Ka, 0 < Ka <= 1
    double fm_index = 5.0;           // kf
    double symbol_rate = 1000.0;     // baud; fs must be an integer multiple
    double fsk_deviation = 2000.0;   // tone spacing, Hz
    uint64_t rng_seed = 1;           // drives digital symbol draws

    // Throws Error{Config} naming the violated invariant.
    void validate() const;

    size_t samples_per_symbol() const;
};

// A labeled sampled real signal. Immutable after creation; snr_db is
// +infinity for noiseless waveforms.
struct Waveform {
    std::vector<double> samples;
    double sample_rate = 0.0;
    double carrier = 0.0;
    Scheme scheme = Scheme::Unknown;
    double snr_db = 0.0;
    uint64_t seed = 0;

    double mean_power() const;
};

// Noiseless waveform for one of the 11 schemes, scaled to unit mean
// power. Digital symbols come from a generator seeded with
// cfg.rng_seed; rectangular pulses throughout.
Waveform synthesize(Scheme scheme, const SynthConfig& cfg);

// Adds zero-mean white Gaussian noise with variance
// power(w) / 10^(snr_db/10). snr_db = +infinity returns a copy.
Waveform add_awgn(const Waveform& w, double snr_db, uint64_t seed);

// 10*log10 of signal power over (noisy - clean) power, in dB.
double measure_snr(const Waveform& clean, const Waveform& noisy);

}  // namespace amc
