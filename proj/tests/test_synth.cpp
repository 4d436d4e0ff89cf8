#include <doctest.h>

#include <cmath>
#include <limits>

#include "error.hpp"
#include "synth.hpp"
#include "test_util.hpp"

using namespace amc;

TEST_CASE("synthesize is deterministic and unit power for all schemes") {
    for (Scheme s : all_schemes()) {
        const Waveform a = testutil::clean(s, 77);
        const Waveform b = testutil::clean(s, 77);
        REQUIRE(a.samples.size() == 4096);
        CHECK(a.samples == b.samples);
        CHECK(a.scheme == s);
        CHECK(a.sample_rate == 100000.0);
        CHECK(a.carrier == 25000.0);
        CHECK(std::isinf(a.snr_db));
        CHECK(a.seed == 77);
        CHECK(std::fabs(a.mean_power() - 1.0) < 1e-12);
    }
}

TEST_CASE("digital schemes differ across seeds, analog schemes do not") {
    for (Scheme s : {Scheme::ASK2, Scheme::ASK4, Scheme::FSK2, Scheme::FSK4,
                     Scheme::PSK2, Scheme::PSK4}) {
        CHECK(testutil::clean(s, 1).samples != testutil::clean(s, 2).samples);
    }
    for (Scheme s : {Scheme::AM, Scheme::DSB, Scheme::LSB, Scheme::USB, Scheme::FM}) {
        CHECK(testutil::clean(s, 1).samples == testutil::clean(s, 2).samples);
    }
}

TEST_CASE("config validation rejects out-of-range parameters") {
    SynthConfig ok;
    ok.validate();
    CHECK(ok.samples_per_symbol() == 100);

    SynthConfig c = ok;
    c.sample_rate = 0.0;
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    c = ok;
    c.carrier = 60000.0;  // above Nyquist
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    c = ok;
    c.message_freq = 30000.0;  // above carrier
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    c = ok;
    c.num_samples = 32;
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    c = ok;
    c.am_depth = 1.2;
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);
    c.am_depth = -0.1;
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    c = ok;
    c.symbol_rate = 3000.0;  // 100000/3000 is not an integer
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    c = ok;
    c.fsk_deviation = 20000.0;  // 4FSK top tone would alias
    CHECK_AMC_ERROR(c.validate(), ErrorCode::Config);

    CHECK_AMC_ERROR(synthesize(Scheme::Unknown, ok), ErrorCode::Argument);
}

TEST_CASE("2ASK occupies exactly the two expected envelope levels") {
    SynthConfig cfg;
    cfg.rng_seed = 5;
    const Waveform w = synthesize(Scheme::ASK2, cfg);
    // Zero-symbol stretches must be exactly zero (before noise).
    size_t zeros = 0;
    for (double v : w.samples) {
        if (v == 0.0) ++zeros;
    }
    CHECK(zeros >= 96);  // at least one full amplitude-0 symbol
    CHECK(zeros < w.samples.size());
}

TEST_CASE("add_awgn hits the requested SNR and infinity passes through") {
    const Waveform w = testutil::clean(Scheme::DSB, 3);
    const Waveform same = add_awgn(w, std::numeric_limits<double>::infinity(), 9);
    CHECK(same.samples == w.samples);
    CHECK(std::isinf(same.snr_db));
    CHECK(same.seed == 9);

    for (double snr : {0.0, 10.0, 20.0}) {
        double acc = 0.0;
        const int reps = 20;
        for (int r = 0; r < reps; ++r) {
            const Waveform n = add_awgn(w, snr, 1000 + r);
            acc += measure_snr(w, n);
        }
        CHECK(std::fabs(acc / reps - snr) < 0.3);
    }

    const Waveform na = add_awgn(w, 15.0, 4);
    const Waveform nb = add_awgn(w, 15.0, 4);
    const Waveform nc = add_awgn(w, 15.0, 5);
    CHECK(na.samples == nb.samples);
    CHECK(na.samples != nc.samples);
}

TEST_CASE("add_awgn and measure_snr reject degenerate input") {
    Waveform zero;
    zero.samples.assign(128, 0.0);
    zero.sample_rate = 100000.0;
    zero.carrier = 25000.0;
    zero.scheme = Scheme::AM;
    CHECK_AMC_ERROR(add_awgn(zero, 10.0, 1), ErrorCode::Degenerate);

    const Waveform w = testutil::clean(Scheme::AM, 1);
    CHECK_AMC_ERROR(add_awgn(w, std::numeric_limits<double>::quiet_NaN(), 1),
                    ErrorCode::Argument);
    CHECK_AMC_ERROR(add_awgn(w, -std::numeric_limits<double>::infinity(), 1),
                    ErrorCode::Argument);

    Waveform shorter = w;
    shorter.samples.resize(100);
    CHECK_AMC_ERROR(measure_snr(w, shorter), ErrorCode::Shape);
    CHECK(std::isinf(measure_snr(w, w)));
}
