#include "scheme.hpp"

namespace amc {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::AM:   return "AM";
        case Scheme::DSB:  return "DSB";
        case Scheme::LSB:  return "LSB";
        case Scheme::USB:  return "USB";
        case Scheme::FM:   return "FM";
        case Scheme::ASK2: return "2ASK";
        case Scheme::ASK4: return "4ASK";
        case Scheme::FSK2: return "2FSK";
        case Scheme::FSK4: return "4FSK";
        case Scheme::PSK2: return "2PSK";
        case Scheme::PSK4: return "4PSK";
        case Scheme::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::optional<Scheme> scheme_from_name(std::string_view name) {
    for (Scheme s : all_schemes()) {
        if (name == scheme_name(s))
            return s;
    }
    if (name == "UNKNOWN")
        return Scheme::Unknown;
    return std::nullopt;
}

int scheme_index(Scheme s) {
    const auto schemes = all_schemes();
    for (int i = 0; i < kSchemeCount; ++i) {
        if (schemes[static_cast<size_t>(i)] == s)
            return i;
    }
    return -1;
}

std::string scheme_name_list() {
    std::string out;
    for (Scheme s : all_schemes()) {
        if (!out.empty())
            out += ",";
        out += scheme_name(s);
    }
    return out;
}

}  // namespace amc
