#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace amc {

// The 11 modulation classes handled by the toolkit, in canonical order.
// This order fixes confusion-matrix axes and model serialization.
enum class Scheme {
    AM,
    DSB,
    LSB,
    USB,
    FM,
    ASK2,
    ASK4,
    FSK2,
    FSK4,
    PSK2,
    PSK4,
    Unknown,
};

inline constexpr int kSchemeCount = 11;

inline constexpr std::array<Scheme, kSchemeCount> all_schemes() {
    return {Scheme::AM,   Scheme::DSB,  Scheme::LSB,  Scheme::USB,
            Scheme::FM,   Scheme::ASK2, Scheme::ASK4, Scheme::FSK2,
            Scheme::FSK4, Scheme::PSK2, Scheme::PSK4};
}

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(std::string_view name);

// Index of a scheme in canonical order; Unknown maps to -1.
int scheme_index(Scheme s);

// Comma-separated list of the valid labels, for error messages.
std::string scheme_name_list();

}  // namespace amc
