#include "cellfree/types.hpp"

#include <algorithm>
#include <cctype>

namespace cellfree {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

}  // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::MR: return "MR";
        case Scheme::MMSE: return "MMSE";
        case Scheme::PMMSE: return "P-MMSE";
        case Scheme::LMMSE: return "L-MMSE";
        case Scheme::LPMMSE: return "LP-MMSE";
    }
    return "?";
}

std::string_view to_string(Mode m) {
    return m == Mode::Centralized ? "centralized" : "distributed";
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Uplink: return "ul";
        case Direction::Downlink: return "dl";
        case Direction::DownlinkGenie: return "dl-genie";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    const std::string u = upper(name);
    if (u == "MR") return Scheme::MR;
    if (u == "MMSE") return Scheme::MMSE;
    if (u == "P-MMSE" || u == "PMMSE") return Scheme::PMMSE;
    if (u == "L-MMSE" || u == "LMMSE") return Scheme::LMMSE;
    if (u == "LP-MMSE" || u == "LPMMSE") return Scheme::LPMMSE;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

Mode parse_mode(std::string_view name) {
    const std::string u = upper(name);
    if (u == "CENTRALIZED") return Mode::Centralized;
    if (u == "DISTRIBUTED") return Mode::Distributed;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

Direction parse_direction(std::string_view name) {
    const std::string u = upper(name);
    if (u == "UL") return Direction::Uplink;
    if (u == "DL") return Direction::Downlink;
    if (u == "DL-GENIE") return Direction::DownlinkGenie;
    throw std::invalid_argument("unknown direction '" + std::string(name) + "'");
}

bool is_scalable(Scheme s) {
    return s == Scheme::MR || s == Scheme::PMMSE || s == Scheme::LPMMSE;
}

bool is_centralized_scheme(Scheme s) { return s == Scheme::MMSE || s == Scheme::PMMSE; }

}  // namespace cellfree
