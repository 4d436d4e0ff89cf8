#include "features.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "error.hpp"
#include "fft.hpp"

namespace amc {

namespace {

constexpr double kVarianceSlack = 1e-12;   // tolerated negative radicand
constexpr double kMomentFloor = 1e-12;     // kurtosis denominator floor
constexpr double kPowerFloor = 1e-30;      // sideband power floor for P

// sqrt(E[sq] - mean^2) with a small tolerance for radicands driven
// negative by rounding; anything more negative is a real fault.
double std_from_moments(double mean_sq, double mean, const char* what) {
    const double r = mean_sq - mean * mean;
    if (r < -kVarianceSlack) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: negative variance radicand %.3e",
                      what, r);
        throw Error(ErrorCode::Numeric, buf);
    }
    return r > 0.0 ? std::sqrt(r) : 0.0;
}

void require_masked(const InstantaneousSeries& inst, const char* what) {
    if (inst.mask.size() != inst.size()) {
        throw Error(ErrorCode::Shape, std::string(what) + ": mask/series length mismatch");
    }
    if (inst.masked_count <= 1) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "%s: need at least 2 samples above threshold, have %zu",
                      what, inst.masked_count);
        throw Error(ErrorCode::InsufficientData, buf);
    }
}

}  // namespace

std::array<double, kFeatureCount> FeatureVector::values() const {
    return {gamma_max, sigma_dp, sigma_ap, p_symmetry, sigma_aa,
            sigma_af,  sigma_a,  mu42_a,   mu42_f};
}

FeatureVector FeatureVector::from_values(const std::array<double, kFeatureCount>& v) {
    FeatureVector f;
    f.gamma_max = v[0];
    f.sigma_dp = v[1];
    f.sigma_ap = v[2];
    f.p_symmetry = v[3];
    f.sigma_aa = v[4];
    f.sigma_af = v[5];
    f.sigma_a = v[6];
    f.mu42_a = v[7];
    f.mu42_f = v[8];
    return f;
}

bool FeatureVector::all_finite() const {
    for (double v : values()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

const std::array<const char*, kFeatureCount>& feature_names() {
    static const std::array<const char*, kFeatureCount> names = {
        "gamma_max", "sigma_dp", "sigma_ap", "p",      "sigma_aa",
        "sigma_af",  "sigma_a",  "mu42a",    "mu42f"};
    return names;
}

double gamma_max(const InstantaneousSeries& inst) {
    const size_t n = inst.amplitude_cn.size();
    if (n < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "gamma_max: need at least 2 samples after trimming");
    }
    std::vector<std::complex<double>> buf(inst.amplitude_cn.begin(),
                                          inst.amplitude_cn.end());
    fft(buf);
    double peak = 0.0;
    for (const auto& c : buf) {
        const double p = std::norm(c);
        if (p > peak) peak = p;
    }
    return peak / static_cast<double>(n);
}

double sigma_dp(const InstantaneousSeries& inst) {
    require_masked(inst, "sigma_dp");
    double sum = 0.0, sum_sq = 0.0;
    for (size_t i = 0; i < inst.size(); ++i) {
        if (!inst.mask[i]) continue;
        const double p = inst.phase_nl[i];
        sum += p;
        sum_sq += p * p;
    }
    const double nc = static_cast<double>(inst.masked_count);
    return std_from_moments(sum_sq / nc, sum / nc, "sigma_dp");
}

double sigma_ap(const InstantaneousSeries& inst) {
    require_masked(inst, "sigma_ap");
    double sum_abs = 0.0, sum_sq = 0.0;
    for (size_t i = 0; i < inst.size(); ++i) {
        if (!inst.mask[i]) continue;
        const double p = inst.phase_nl[i];
        sum_abs += std::fabs(p);
        sum_sq += p * p;
    }
    const double nc = static_cast<double>(inst.masked_count);
    return std_from_moments(sum_sq / nc, sum_abs / nc, "sigma_ap");
}

double spectrum_symmetry(const Spectrum& spec) {
    const long fcn = spec.carrier_bin;
    const long n = static_cast<long>(spec.length);
    if (fcn < 1) {
        throw Error(ErrorCode::Config,
                    "spectrum symmetry: carrier bin index must be >= 1");
    }
    if (n < 2 * (fcn + 1)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "spectrum symmetry: need N >= 2*(fcn+1), have N=%ld fcn=%ld",
                      n, fcn);
        throw Error(ErrorCode::Shape, buf);
    }
    double lower = 0.0, upper = 0.0;
    for (long i = 1; i <= fcn; ++i) {
        lower += std::norm(spec.bins[static_cast<size_t>(i)]);
        upper += std::norm(spec.bins[static_cast<size_t>(i + fcn + 1)]);
    }
    const double total = lower + upper;
    if (total < kPowerFloor) {
        throw Error(ErrorCode::Degenerate,
                    "spectrum symmetry: sideband power is zero");
    }
    return (lower - upper) / total;
}

double sigma_aa(const InstantaneousSeries& inst) {
    const size_t n = inst.amplitude_cn.size();
    if (n < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "sigma_aa: need at least 2 samples after trimming");
    }
    double sum_abs = 0.0, sum_sq = 0.0;
    for (double a : inst.amplitude_cn) {
        sum_abs += std::fabs(a);
        sum_sq += a * a;
    }
    const double nn = static_cast<double>(n);
    return std_from_moments(sum_sq / nn, sum_abs / nn, "sigma_aa");
}

double sigma_af(const InstantaneousSeries& inst) {
    require_masked(inst, "sigma_af");
    double sum_abs = 0.0, sum_sq = 0.0;
    for (size_t i = 0; i < inst.size(); ++i) {
        if (!inst.mask[i]) continue;
        const double f = inst.freq_cn[i];
        sum_abs += std::fabs(f);
        sum_sq += f * f;
    }
    const double nc = static_cast<double>(inst.masked_count);
    return std_from_moments(sum_sq / nc, sum_abs / nc, "sigma_af");
}

double sigma_a(const InstantaneousSeries& inst) {
    require_masked(inst, "sigma_a");
    double sum = 0.0, sum_sq = 0.0;
    for (size_t i = 0; i < inst.size(); ++i) {
        if (!inst.mask[i]) continue;
        const double a = inst.amplitude_cn[i];
        sum += a;
        sum_sq += a * a;
    }
    const double nc = static_cast<double>(inst.masked_count);
    return std_from_moments(sum_sq / nc, sum / nc, "sigma_a");
}

namespace {

double kurtosis(const std::vector<double>& x, bool* degenerate, const char* what) {
    if (x.size() < 2) {
        throw Error(ErrorCode::InsufficientData,
                    std::string(what) + ": need at least 2 samples");
    }
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double sq = v * v;
        m2 += sq;
        m4 += sq * sq;
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m4 /= n;
    if (m2 < kMomentFloor) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    return m4 / (m2 * m2);
}

}  // namespace

double mu42_amp(const InstantaneousSeries& inst, bool* degenerate) {
    return kurtosis(inst.amplitude_cn, degenerate, "mu42a");
}

double mu42_freq(const InstantaneousSeries& inst, bool* degenerate) {
    return kurtosis(inst.freq_cn, degenerate, "mu42f");
}

FeatureVector extract_all(const Waveform& w, const FeatureConfig& cfg) {
    const Spectrum spec = dft(w);
    InstantaneousConfig icfg;
    icfg.amp_threshold = cfg.amp_threshold;
    icfg.edge_trim = cfg.edge_trim;
    const InstantaneousSeries inst = instantaneous(w, w.carrier, icfg);

    FeatureVector f;
    f.gamma_max = gamma_max(inst);
    f.sigma_dp = sigma_dp(inst);
    f.sigma_ap = sigma_ap(inst);
    f.p_symmetry = spectrum_symmetry(spec);
    f.sigma_aa = sigma_aa(inst);
    f.sigma_af = sigma_af(inst);
    f.sigma_a = sigma_a(inst);
    f.mu42_a = mu42_amp(inst, &f.mu42_a_degenerate);
    f.mu42_f = mu42_freq(inst, &f.mu42_f_degenerate);
    return f;
}

}  // namespace amc
