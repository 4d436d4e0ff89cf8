#pragma once

#include <array>
#include <cstddef>

#include "dsp.hpp"
#include "synth.hpp"

namespace amc {

inline constexpr size_t kFeatureCount = 9;

// The nine spectral features in canonical order. The kurtosis entries
// carry a degenerate flag when the underlying second moment vanishes
// (constant envelope / constant frequency); the value is then 0.
struct FeatureVector {
    double gamma_max = 0.0;   // peak PSD of centered normalized amplitude
    double sigma_dp = 0.0;    // std of direct nonlinear phase (masked)
    double sigma_ap = 0.0;    // std of absolute nonlinear phase (masked)
    double p_symmetry = 0.0;  // sideband power symmetry around fc
    double sigma_aa = 0.0;    // std of absolute centered amplitude (all samples)
    double sigma_af = 0.0;    // std of absolute centered frequency (masked)
    double sigma_a = 0.0;     // std of centered amplitude (masked)
    double mu42_a = 0.0;      // amplitude kurtosis
    double mu42_f = 0.0;      // frequency kurtosis
    bool mu42_a_degenerate = false;
    bool mu42_f_degenerate = false;

    std::array<double, kFeatureCount> values() const;
    static FeatureVector from_values(const std::array<double, kFeatureCount>& v);
    bool all_finite() const;
};

// Canonical serialization names, same order as FeatureVector::values().
const std::array<const char*, kFeatureCount>& feature_names();

struct FeatureConfig {
    double amp_threshold = 1.0;  // At over normalized amplitude
    size_t edge_trim = 32;
};

// Individual feature computations. Each matches the summation form of
// its defining formula; see the per-field notes above for which ones
// run over the At-masked subset.
double gamma_max(const InstantaneousSeries& inst);
double sigma_dp(const InstantaneousSeries& inst);
double sigma_ap(const InstantaneousSeries& inst);
double spectrum_symmetry(const Spectrum& spec);
double sigma_aa(const InstantaneousSeries& inst);
double sigma_af(const InstantaneousSeries& inst);
double sigma_a(const InstantaneousSeries& inst);
double mu42_amp(const InstantaneousSeries& inst, bool* degenerate = nullptr);
double mu42_freq(const InstantaneousSeries& inst, bool* degenerate = nullptr);

// Full pipeline: analytic signal -> instantaneous series -> all nine
// features plus the spectrum-symmetry term from the waveform DFT.
FeatureVector extract_all(const Waveform& w, const FeatureConfig& cfg = {});

}  // namespace amc
