#include "wavefile.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace amc {

namespace {

void put_le64(std::ofstream& f, double v) {
    const uint64_t u = std::bit_cast<uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    f.write(b, 8);
}

double get_le64(const char* b) {
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) {
        u |= static_cast<uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return std::bit_cast<double>(u);
}

double parse_double(const std::string& tok, const std::string& path,
                    const char* what) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Format,
                    path + ": bad " + what + " field '" + tok + "'");
    }
}

}  // namespace

void save_waveform(const Waveform& w, const std::string& path) {
    if (w.scheme == Scheme::Unknown) {
        throw Error(ErrorCode::Argument, "waveform has no scheme label");
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open for writing: " + path);
    char hdr[256];
    std::snprintf(hdr, sizeof(hdr), "AMCWAV1 %.17g %.17g %zu %s %.17g %llu\n",
                  w.sample_rate, w.carrier, w.samples.size(),
                  scheme_name(w.scheme), w.snr_db,
                  static_cast<unsigned long long>(w.seed));
    f << hdr;
    for (double v : w.samples) put_le64(f, v);
    if (!f) throw Error(ErrorCode::Io, "write failed: " + path);
}

Waveform load_waveform(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open for reading: " + path);
    std::string line;
    if (!std::getline(f, line)) {
        throw Error(ErrorCode::Format, path + ": missing header line");
    }
    std::istringstream is(line);
    std::string tag, fs_tok, fc_tok, scheme_tok, snr_tok;
    size_t n = 0;
    unsigned long long seed = 0;
    if (!(is >> tag >> fs_tok >> fc_tok >> n >> scheme_tok >> snr_tok >> seed)) {
        throw Error(ErrorCode::Format, path + ": bad header line");
    }
    if (tag != "AMCWAV1") {
        throw Error(ErrorCode::Format,
                    path + ": unknown waveform version tag '" + tag + "'");
    }
    Waveform w;
    w.sample_rate = parse_double(fs_tok, path, "sample_rate");
    w.carrier = parse_double(fc_tok, path, "carrier");
    w.snr_db = parse_double(snr_tok, path, "snr_db");
    auto s = scheme_from_name(scheme_tok);
    if (!s) throw Error(ErrorCode::Format, path + ": unknown scheme '" + scheme_tok + "'");
    w.scheme = *s;
    w.seed = seed;
    if (!(w.sample_rate > 0.0) || n == 0) {
        throw Error(ErrorCode::Format, path + ": non-positive sample rate or length");
    }
    std::vector<char> raw(8 * n);
    f.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(f.gcount()) != raw.size()) {
        throw Error(ErrorCode::Format,
                    path + ": truncated sample block (expected " +
                        std::to_string(n) + " samples)");
    }
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i) w.samples[i] = get_le64(raw.data() + 8 * i);
    return w;
}

}  // namespace amc
