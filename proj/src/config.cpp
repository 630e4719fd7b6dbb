#include "cellfree/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cellfree {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

struct Entry {
    std::string value;
    int line = 0;
};

using KeyMap = std::map<std::string, Entry>;

KeyMap tokenize(std::string_view text) {
    KeyMap kv;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto cut = raw.find_first_of("#;");
        std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("", "line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        if (kv.count(key))
            throw ConfigError(key, "duplicate key '" + key + "' on line " + std::to_string(lineno));
        kv[key] = Entry{value, lineno};
    }
    return kv;
}

class Reader {
public:
    explicit Reader(KeyMap kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    const std::string& raw(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError(key, "missing required key '" + key + "'");
        used_.insert(key);
        return it->second.value;
    }

    std::uint64_t u64(const std::string& key) {
        const std::string& v = raw(key);
        std::uint64_t out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError(key, "key '" + key + "' expects a nonnegative integer, got '" + v + "'");
        return out;
    }

    std::size_t size(const std::string& key) { return static_cast<std::size_t>(u64(key)); }

    double real(const std::string& key) {
        const std::string& v = raw(key);
        double out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
            throw ConfigError(key, "key '" + key + "' expects a real number, got '" + v + "'");
        return out;
    }

    bool boolean(const std::string& key) {
        const std::string& v = raw(key);
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw ConfigError(key, "key '" + key + "' expects true/false, got '" + v + "'");
    }

    template <class T, class Fn>
    void optional(const std::string& key, T& target, Fn read) {
        if (has(key)) target = (this->*read)(key);
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : kv_)
            if (!used_.count(key))
                throw ConfigError(key, "unknown key '" + key + "' on line " + std::to_string(entry.line));
    }

private:
    KeyMap kv_;
    std::set<std::string> used_;
};

std::vector<Scheme> parse_scheme_list(const std::string& key, const std::string& v) {
    std::vector<Scheme> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            Scheme s = parse_scheme(item);
            for (Scheme seen : out)
                if (seen == s) throw ConfigError(key, "scheme '" + item + "' listed twice");
            out.push_back(s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, "key '" + key + "': " + e.what());
        }
    }
    return out;
}

std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

SimulationConfig parse_config_text(std::string_view text) {
    Reader r(tokenize(text));
    SimulationConfig c;

    c.seed = r.u64("campaign.seed");
    c.num_aps = r.size("network.num_aps");
    c.antennas_per_ap = r.size("network.antennas_per_ap");
    c.num_ues = r.size("network.num_ues");
    c.coherence_len = r.size("frame.coherence_len");
    c.pilot_len = r.size("frame.pilot_len");
    c.ul_data_len = r.size("frame.ul_data_len");
    c.dl_data_len = r.size("frame.dl_data_len");

    r.optional("network.area_side_km", c.area_side_km, &Reader::real);
    r.optional("network.ap_height_m", c.ap_height_m, &Reader::real);

    r.optional("power.ue_w", c.ue_power_w, &Reader::real);
    r.optional("power.ap_w", c.ap_power_w, &Reader::real);
    double noise_dbm = kDefaultNoiseDbm;
    r.optional("power.noise_dbm", noise_dbm, &Reader::real);
    c.noise_ul_w = c.noise_dl_w = dbm_to_watt(noise_dbm);
    if (r.has("power.noise_ul_dbm")) c.noise_ul_w = dbm_to_watt(r.real("power.noise_ul_dbm"));
    if (r.has("power.noise_dl_dbm")) c.noise_dl_w = dbm_to_watt(r.real("power.noise_dl_dbm"));
    r.optional("power.noise_ul_w", c.noise_ul_w, &Reader::real);
    r.optional("power.noise_dl_w", c.noise_dl_w, &Reader::real);

    r.optional("channel.ref_loss_db", c.channel.ref_loss_db, &Reader::real);
    r.optional("channel.slope_db", c.channel.slope_db, &Reader::real);
    r.optional("channel.shadowing_std_db", c.channel.shadowing_std_db, &Reader::real);
    r.optional("channel.angular_spread_deg", c.channel.angular_spread_deg, &Reader::real);

    r.optional("cluster.neighbor_radius_km", c.neighbor_radius_km, &Reader::real);
    r.optional("cluster.neighbor_cap", c.neighbor_cap, &Reader::size);
    r.optional("cluster.serve_all", c.serve_all, &Reader::boolean);

    r.optional("campaign.num_setups", c.num_setups, &Reader::size);
    r.optional("campaign.num_realizations", c.num_realizations, &Reader::size);
    r.optional("campaign.genie", c.genie, &Reader::boolean);
    if (r.has("campaign.schemes"))
        c.schemes = parse_scheme_list("campaign.schemes", r.raw("campaign.schemes"));
    if (r.has("campaign.mode")) {
        try {
            c.mode = parse_mode(r.raw("campaign.mode"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("campaign.mode", std::string("key 'campaign.mode': ") + e.what());
        }
    }

    r.reject_unknown();
    validate(c);
    return c;
}

SimulationConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const SimulationConfig& c) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ValidationError(msg);
    };
    require(c.num_aps > 0, "network.num_aps must be positive");
    require(c.antennas_per_ap > 0, "network.antennas_per_ap must be positive");
    require(c.num_ues > 0, "network.num_ues must be positive");
    require(c.pilot_len > 0, "frame.pilot_len must be positive");
    require(c.coherence_len > 0, "frame.coherence_len must be positive");
    require(c.pilot_len + c.ul_data_len + c.dl_data_len <= c.coherence_len,
            "coherence block budget exceeded: pilot_len + ul_data_len + dl_data_len = " +
                std::to_string(c.pilot_len + c.ul_data_len + c.dl_data_len) + " > coherence_len = " +
                std::to_string(c.coherence_len));
    require(c.area_side_km > 0, "network.area_side_km must be positive");
    require(c.ap_height_m >= 0, "network.ap_height_m must be nonnegative");
    require(c.ue_power_w > 0, "power.ue_w must be positive");
    require(c.ap_power_w > 0, "power.ap_w must be positive");
    require(c.noise_ul_w > 0 && c.noise_dl_w > 0, "noise power must be positive");
    require(c.channel.shadowing_std_db >= 0, "channel.shadowing_std_db must be nonnegative");
    require(c.channel.angular_spread_deg >= 0, "channel.angular_spread_deg must be nonnegative");
    require(c.neighbor_radius_km >= 0, "cluster.neighbor_radius_km must be nonnegative");
    require(c.num_setups > 0, "campaign.num_setups must be positive");
    require(!c.schemes.empty(), "campaign.schemes must list at least one scheme");
}

std::string to_text(const SimulationConfig& c) {
    std::ostringstream o;
    o << "[network]\n"
      << "num_aps = " << c.num_aps << "\n"
      << "antennas_per_ap = " << c.antennas_per_ap << "\n"
      << "num_ues = " << c.num_ues << "\n"
      << "area_side_km = " << fmt_real(c.area_side_km) << "\n"
      << "ap_height_m = " << fmt_real(c.ap_height_m) << "\n\n"
      << "[frame]\n"
      << "coherence_len = " << c.coherence_len << "\n"
      << "pilot_len = " << c.pilot_len << "\n"
      << "ul_data_len = " << c.ul_data_len << "\n"
      << "dl_data_len = " << c.dl_data_len << "\n\n"
      << "[power]\n"
      << "ue_w = " << fmt_real(c.ue_power_w) << "\n"
      << "ap_w = " << fmt_real(c.ap_power_w) << "\n"
      << "noise_ul_w = " << fmt_real(c.noise_ul_w) << "\n"
      << "noise_dl_w = " << fmt_real(c.noise_dl_w) << "\n\n"
      << "[channel]\n"
      << "ref_loss_db = " << fmt_real(c.channel.ref_loss_db) << "\n"
      << "slope_db = " << fmt_real(c.channel.slope_db) << "\n"
      << "shadowing_std_db = " << fmt_real(c.channel.shadowing_std_db) << "\n"
      << "angular_spread_deg = " << fmt_real(c.channel.angular_spread_deg) << "\n\n"
      << "[cluster]\n"
      << "neighbor_radius_km = " << fmt_real(c.neighbor_radius_km) << "\n"
      << "neighbor_cap = " << c.neighbor_cap << "\n"
      << "serve_all = " << (c.serve_all ? "true" : "false") << "\n\n"
      << "[campaign]\n"
      << "seed = " << c.seed << "\n"
      << "num_setups = " << c.num_setups << "\n"
      << "num_realizations = " << c.num_realizations << "\n"
      << "mode = " << to_string(c.mode) << "\n"
      << "genie = " << (c.genie ? "true" : "false") << "\n"
      << "schemes = ";
    for (std::size_t i = 0; i < c.schemes.size(); ++i) o << (i ? ", " : "") << to_string(c.schemes[i]);
    o << "\n";
    return o.str();
}

std::uint64_t config_hash(const SimulationConfig& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : to_text(c)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace cellfree
