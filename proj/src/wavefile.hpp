#pragma once

#include <string>

#include "synth.hpp"

namespace amc {

// Waveform container: one text header line
//   AMCWAV1 <fs> <fc> <N> <scheme> <snr_db> <seed>
// followed by N samples as 64-bit little-endian doubles. snr_db is
// "inf" for noiseless waveforms.
void save_waveform(const Waveform& w, const std::string& path);
Waveform load_waveform(const std::string& path);

}  // namespace amc
