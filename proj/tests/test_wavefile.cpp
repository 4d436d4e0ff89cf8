#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "error.hpp"
#include "synth.hpp"
#include "test_util.hpp"
#include "wavefile.hpp"

using namespace amc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
}

void dump(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
}

}  // namespace

TEST_CASE("waveform files round-trip samples bit-exactly") {
    const Waveform w = testutil::noisy(Scheme::FSK4, 7.25, 123, 456);
    save_waveform(w, "wf_rt.bin");
    const Waveform r = load_waveform("wf_rt.bin");
    CHECK(r.sample_rate == w.sample_rate);
    CHECK(r.carrier == w.carrier);
    CHECK(r.scheme == w.scheme);
    CHECK(r.snr_db == w.snr_db);
    CHECK(r.seed == w.seed);
    REQUIRE(r.samples.size() == w.samples.size());
    for (size_t i = 0; i < w.samples.size(); ++i) {
        CHECK(r.samples[i] == w.samples[i]);
    }
    std::remove("wf_rt.bin");
}

TEST_CASE("noiseless waveforms carry an infinite snr field") {
    const Waveform w = testutil::clean(Scheme::USB, 9);
    CHECK(w.snr_db == std::numeric_limits<double>::infinity());
    save_waveform(w, "wf_inf.bin");
    const Waveform r = load_waveform("wf_inf.bin");
    CHECK(r.snr_db == std::numeric_limits<double>::infinity());
    CHECK(r.samples == w.samples);
    std::remove("wf_inf.bin");
}

TEST_CASE("malformed waveform files are rejected") {
    const Waveform w = testutil::clean(Scheme::AM, 3);
    save_waveform(w, "wf.bin");
    const std::string text = slurp("wf.bin");
    const size_t header_end = text.find('\n') + 1;

    dump("wf_bad.bin", "NOTAWAV 1 2 3 AM 4 5\n");
    CHECK_AMC_ERROR(load_waveform("wf_bad.bin"), ErrorCode::Format);

    // sample block shorter than the declared count
    dump("wf_bad.bin", text.substr(0, header_end + 8 * 100));
    CHECK_AMC_ERROR(load_waveform("wf_bad.bin"), ErrorCode::Format);

    std::string bad_scheme = text.substr(0, header_end);
    const size_t at = bad_scheme.find(" AM ");
    REQUIRE(at != std::string::npos);
    bad_scheme.replace(at, 4, " ZZ ");
    dump("wf_bad.bin", bad_scheme + text.substr(header_end));
    CHECK_AMC_ERROR(load_waveform("wf_bad.bin"), ErrorCode::Format);

    dump("wf_bad.bin", "");
    CHECK_AMC_ERROR(load_waveform("wf_bad.bin"), ErrorCode::Format);

    CHECK_AMC_ERROR(load_waveform("wf_missing.bin"), ErrorCode::Io);

    const Waveform unk;
    CHECK_AMC_ERROR(save_waveform(unk, "wf_bad.bin"), ErrorCode::Argument);

    std::remove("wf.bin");
    std::remove("wf_bad.bin");
}
