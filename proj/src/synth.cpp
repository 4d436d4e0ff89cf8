#include "synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "error.hpp"

namespace amc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Deterministic standard normal draws via Box-Muller on mt19937_64.
// Kept self-contained so identical seeds give identical noise on any
// standard library.
class GaussianSource {
public:
    explicit GaussianSource(uint64_t seed) : rng_(seed) {}

    double operator()() {
        // u1 in (0,1], u2 in [0,1)
        const double u1 =
            (static_cast<double>(rng_() >> 11) + 1.0) / 9007199254740993.0;
        const double u2 =
            static_cast<double>(rng_() >> 11) / 9007199254740992.0;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

private:
    std::mt19937_64 rng_;
};

void normalize_power(std::vector<double>& x) {
    double p = 0.0;
    for (double v : x)
        p += v * v;
    p /= static_cast<double>(x.size());
    if (p <= 0.0)
        throw Error(ErrorCode::Degenerate, "synthesized waveform has zero power");
    const double scale = 1.0 / std::sqrt(p);
    for (double& v : x)
        v *= scale;
}

std::vector<int> draw_symbols(size_t count, int levels, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> sym(count);
    for (size_t i = 0; i < count; ++i)
        sym[i] = static_cast<int>(rng() % static_cast<uint64_t>(levels));
    return sym;
}

}  // namespace

void SynthConfig::validate() const {
    if (!(sample_rate > 0.0))
        throw Error(ErrorCode::Config, "fs > 0 violated");
    if (!(carrier > 0.0 && carrier < sample_rate / 2.0))
        throw Error(ErrorCode::Config, "0 < fc < fs/2 violated");
    if (!(message_freq > 0.0 && message_freq < carrier))
        throw Error(ErrorCode::Config, "0 < fm < fc violated");
    if (num_samples < 64)
        throw Error(ErrorCode::Config, "N >= 64 violated");
    if (!(am_depth >= 0.0 && am_depth <= 1.0))
        throw Error(ErrorCode::Config, "0 <= Ka <= 1 violated");
    if (!(fm_index > 0.0))
        throw Error(ErrorCode::Config, "kf > 0 violated");
    if (!(symbol_rate > 0.0))
        throw Error(ErrorCode::Config, "symbol_rate > 0 violated");
    const double sps = sample_rate / symbol_rate;
    if (std::fabs(sps - std::round(sps)) > 1e-9 || std::round(sps) < 1.0)
        throw Error(ErrorCode::Config,
                    "symbol_rate must divide fs evenly (integer samples per symbol)");
    if (!(fsk_deviation > 0.0))
        throw Error(ErrorCode::Config, "fsk_deviation > 0 violated");
    // 4FSK is the widest scheme: top tone at fc + 1.5 * deviation
    if (!(carrier + fsk_deviation * 1.5 < sample_rate / 2.0))
        throw Error(ErrorCode::Config,
                    "fc + fsk_deviation*(levels-1)/2 < fs/2 violated (4FSK aliasing)");
}

size_t SynthConfig::samples_per_symbol() const {
    return static_cast<size_t>(std::llround(sample_rate / symbol_rate));
}

double Waveform::mean_power() const {
    if (samples.empty())
        return 0.0;
    double p = 0.0;
    for (double v : samples)
        p += v * v;
    return p / static_cast<double>(samples.size());
}

Waveform synthesize(Scheme scheme, const SynthConfig& cfg) {
    cfg.validate();
    if (scheme == Scheme::Unknown)
        throw Error(ErrorCode::Argument, "cannot synthesize UNKNOWN scheme");

    const size_t n = cfg.num_samples;
    const double fs = cfg.sample_rate;
    const double fc = cfg.carrier;
    const double fm = cfg.message_freq;
    const size_t sps = cfg.samples_per_symbol();
    const size_t nsym = (n + sps - 1) / sps;

    std::vector<double> x(n);

    switch (scheme) {
        case Scheme::AM: {
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                x[i] = (1.0 + cfg.am_depth * std::cos(kTwoPi * fm * t)) *
                       std::cos(kTwoPi * fc * t);
            }
            break;
        }
        case Scheme::DSB: {
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                x[i] = std::cos(kTwoPi * fm * t) * std::cos(kTwoPi * fc * t);
            }
            break;
        }
        case Scheme::LSB:
        case Scheme::USB: {
            // Phasing construction: message in quadrature with its exact
            // Hilbert pair (the Hilbert transform of cos is sin), which
            // cancels one sideband completely.
            const double sign = (scheme == Scheme::USB) ? -1.0 : 1.0;
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                x[i] = std::cos(kTwoPi * fm * t) * std::cos(kTwoPi * fc * t) +
                       sign * std::sin(kTwoPi * fm * t) * std::sin(kTwoPi * fc * t);
            }
            break;
        }
        case Scheme::FM: {
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                x[i] = std::cos(kTwoPi * fc * t +
                                cfg.fm_index * std::sin(kTwoPi * fm * t));
            }
            break;
        }
        case Scheme::ASK2:
        case Scheme::ASK4: {
            const int levels = (scheme == Scheme::ASK2) ? 2 : 4;
            const auto sym = draw_symbols(nsym, levels, cfg.rng_seed);
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                const double amp = static_cast<double>(sym[i / sps]) /
                                   static_cast<double>(levels - 1);
                x[i] = amp * std::cos(kTwoPi * fc * t);
            }
            break;
        }
        case Scheme::FSK2:
        case Scheme::FSK4: {
            const int levels = (scheme == Scheme::FSK2) ? 2 : 4;
            const auto sym = draw_symbols(nsym, levels, cfg.rng_seed);
            // Continuous-phase switching keeps the envelope constant.
            double phase = 0.0;
            for (size_t i = 0; i < n; ++i) {
                const double tone =
                    fc + (static_cast<double>(sym[i / sps]) -
                          static_cast<double>(levels - 1) / 2.0) * cfg.fsk_deviation;
                x[i] = std::cos(phase);
                phase += kTwoPi * tone / fs;
            }
            break;
        }
        case Scheme::PSK2:
        case Scheme::PSK4: {
            const int levels = (scheme == Scheme::PSK2) ? 2 : 4;
            const auto sym = draw_symbols(nsym, levels, cfg.rng_seed);
            const double base = (scheme == Scheme::PSK2) ? 0.0 : std::numbers::pi / 4.0;
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                const double theta =
                    base + kTwoPi * static_cast<double>(sym[i / sps]) /
                               static_cast<double>(levels);
                x[i] = std::cos(kTwoPi * fc * t + theta);
            }
            break;
        }
        case Scheme::Unknown:
            break;
    }

    normalize_power(x);

    Waveform w;
    w.samples = std::move(x);
    w.sample_rate = fs;
    w.carrier = fc;
    w.scheme = scheme;
    w.snr_db = std::numeric_limits<double>::infinity();
    w.seed = cfg.rng_seed;
    return w;
}

Waveform add_awgn(const Waveform& w, double snr_db, uint64_t seed) {
    const double power = w.mean_power();
    if (!(power > 0.0))
        throw Error(ErrorCode::Degenerate, "add_awgn: input waveform has zero power");
    Waveform out = w;
    out.seed = seed;
    if (std::isinf(snr_db) && snr_db > 0.0) {
        out.snr_db = snr_db;
        return out;
    }
    if (!std::isfinite(snr_db))
        throw Error(ErrorCode::Argument, "add_awgn: snr_db must be finite or +inf");
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    GaussianSource noise(seed);
    for (double& v : out.samples)
        v += sigma * noise();
    out.snr_db = snr_db;
    return out;
}

double measure_snr(const Waveform& clean, const Waveform& noisy) {
    if (clean.samples.size() != noisy.samples.size())
        throw Error(ErrorCode::Shape, "measure_snr: waveform lengths differ");
    if (clean.sample_rate != noisy.sample_rate)
        throw Error(ErrorCode::Shape, "measure_snr: sampling rates differ");
    double ps = 0.0, pn = 0.0;
    for (size_t i = 0; i < clean.samples.size(); ++i) {
        const double s = clean.samples[i];
        const double d = noisy.samples[i] - s;
        ps += s * s;
        pn += d * d;
    }
    if (pn == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(ps / pn);
}

}  // namespace amc
