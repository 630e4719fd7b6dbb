#include "cellfree/scenarios.hpp"

#include <cmath>
#include <fstream>

namespace cellfree {

namespace {

SimulationConfig base_config(std::size_t L, std::size_t N, std::size_t K, double side_km) {
    SimulationConfig c;
    c.num_aps = L;
    c.antennas_per_ap = N;
    c.num_ues = K;
    c.area_side_km = side_km;
    c.coherence_len = 200;
    c.pilot_len = 10;
    c.noise_ul_w = dbm_to_watt(kDefaultNoiseDbm);
    c.noise_dl_w = c.noise_ul_w;
    c.seed = 1;
    return c;
}

SimulationConfig variant(SimulationConfig c, bool uplink, bool serve_all, Mode mode, std::vector<Scheme> schemes) {
    c.ul_data_len = uplink ? 190 : 0;
    c.dl_data_len = uplink ? 0 : 190;
    c.genie = !uplink;
    c.serve_all = serve_all;
    c.mode = mode;
    c.schemes = std::move(schemes);
    return c;
}

/// The six campaigns behind the uplink and downlink comparisons.
std::vector<CampaignSpec> standard_campaigns(const SimulationConfig& b) {
    return {
        {"ul-all-centralized", variant(b, true, true, Mode::Centralized, {Scheme::MMSE})},
        {"ul-dcc-centralized", variant(b, true, false, Mode::Centralized, {Scheme::PMMSE})},
        {"ul-all-distributed", variant(b, true, true, Mode::Distributed, {Scheme::LMMSE, Scheme::MR})},
        {"ul-dcc-distributed", variant(b, true, false, Mode::Distributed, {Scheme::LPMMSE, Scheme::MR})},
        {"dl-dcc-centralized", variant(b, false, false, Mode::Centralized, {Scheme::PMMSE})},
        {"dl-dcc-distributed", variant(b, false, false, Mode::Distributed, {Scheme::LPMMSE, Scheme::MR})},
    };
}

std::vector<OrderingClaim> standard_orderings() {
    return {
        {"MMSE (All)", "P-MMSE", Direction::Uplink},
        {"P-MMSE", "LP-MMSE", Direction::Uplink},
        {"LP-MMSE", "MR", Direction::Uplink},
        {"L-MMSE (All)", "MR (All)", Direction::Uplink},
        {"LP-MMSE", "MR", Direction::Downlink},
    };
}

std::string label_of(const SimulationConfig& cfg, Scheme s) {
    std::string l(to_string(s));
    if (cfg.serve_all) l += " (All)";
    return l;
}

void apply(Scenario& sc, const ScenarioOverrides& ov) {
    for (auto& c : sc.campaigns) {
        if (ov.seed) c.cfg.seed = *ov.seed;
        if (ov.num_setups) c.cfg.num_setups = *ov.num_setups;
        if (ov.num_realizations) c.cfg.num_realizations = *ov.num_realizations;
    }
}

Scenario desk(std::string name, std::size_t L, std::size_t N) {
    Scenario sc;
    sc.name = std::move(name);
    sc.description = "desk scale: L=" + std::to_string(L) + ", N=" + std::to_string(N) +
                     ", K=40 on a 1 km wrap-around square (100 antennas/km^2, 40 UEs/km^2)";
    SimulationConfig b = base_config(L, N, 40, 1.0);
    b.num_setups = 20;
    b.num_realizations = 500;
    sc.campaigns = standard_campaigns(b);
    sc.orderings = standard_orderings();
    sc.hardening = {{"LP-MMSE", "MR"}};
    sc.check_genie_dominance = true;
    return sc;
}

Scenario full(std::string name, std::size_t L, std::size_t N, bool with_ratios) {
    Scenario sc;
    sc.name = std::move(name);
    sc.full_scale = true;
    sc.description = "full scale: L=" + std::to_string(L) + ", N=" + std::to_string(N) +
                     ", K=100 on a 2 km wrap-around square";
    SimulationConfig b = base_config(L, N, 100, 2.0);
    b.num_setups = 25;
    b.num_realizations = 500;
    sc.campaigns = standard_campaigns(b);
    sc.orderings = standard_orderings();
    sc.hardening = {{"LP-MMSE", "MR"}};
    sc.check_genie_dominance = true;
    if (with_ratios) {
        sc.ratios = {
            {"UL LP-MMSE / MR (All)", "LP-MMSE", Direction::Uplink, "MR (All)", Direction::Uplink, 2.2, 3.2},
            {"UL P-MMSE / MMSE (All)", "P-MMSE", Direction::Uplink, "MMSE (All)", Direction::Uplink, 0.80, 0.98},
            {"DL LP-MMSE bound / genie", "LP-MMSE", Direction::Downlink, "LP-MMSE", Direction::DownlinkGenie, 0.85, 1.0},
            {"DL MR bound / genie", "MR", Direction::Downlink, "MR", Direction::DownlinkGenie, 0.0, 0.75},
            {"DL P-MMSE bound / genie", "P-MMSE", Direction::Downlink, "P-MMSE", Direction::DownlinkGenie, 0.93, 1.0},
        };
    }
    return sc;
}

Scenario smoke() {
    Scenario sc;
    sc.name = "smoke";
    sc.description = "tiny network for quick checks: L=16, N=1, K=8 on a 0.4 km square";
    SimulationConfig b = base_config(16, 1, 8, 0.4);
    b.pilot_len = 4;
    b.neighbor_radius_km = 0.15;
    b.num_setups = 3;
    b.num_realizations = 40;
    sc.campaigns = standard_campaigns(b);
    return sc;
}

/// Paired sign test on per-setup means. Ties count against `a`.
PropertyResult sign_test(std::string name, const ColumnSummary& a, const ColumnSummary& b) {
    std::size_t wins = 0;
    for (std::size_t s = 0; s < a.setup_means.size(); ++s)
        if (a.setup_means[s] > b.setup_means[s]) ++wins;
    const std::size_t n = a.setup_means.size();
    const std::size_t need = sign_test_threshold(n);
    PropertyResult p;
    p.name = std::move(name);
    p.pass = need <= n && wins >= need;
    p.detail = std::to_string(wins) + "/" + std::to_string(n) + " setups (need " + std::to_string(need) + "), means " +
               format_double(a.mean) + " vs " + format_double(b.mean);
    return p;
}

}  // namespace

std::vector<std::string> scenario_names() { return {"smoke", "desk-n1", "desk-n4", "setup-i", "setup-ii"}; }

Scenario make_scenario(std::string_view name, const ScenarioOverrides& ov) {
    Scenario sc;
    if (name == "smoke")
        sc = smoke();
    else if (name == "desk-n1")
        sc = desk("desk-n1", 100, 1);
    else if (name == "desk-n4")
        sc = desk("desk-n4", 25, 4);
    else if (name == "setup-i")
        sc = full("setup-i", 400, 1, true);
    else if (name == "setup-ii")
        sc = full("setup-ii", 100, 4, false);
    else
        throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
    apply(sc, ov);
    for (const auto& c : sc.campaigns) validate(c.cfg);
    return sc;
}

const ColumnSummary& ScenarioReport::column(std::string_view label, Direction d) const {
    for (const auto& c : columns)
        if (c.label == label && c.direction == d) return c;
    throw std::out_of_range("scenario has no column '" + std::string(label) + "' (" + std::string(to_string(d)) + ")");
}

bool ScenarioReport::passed() const {
    for (const auto& p : properties)
        if (!p.pass) return false;
    return true;
}

std::size_t sign_test_threshold(std::size_t n, double alpha) {
    // Upper tail of Binomial(n, 1/2), accumulated from c = n downwards.
    double tail = 0.0;
    std::size_t c = n + 1;
    while (c > 0) {
        const double pmf = std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(c)) -
                                    std::lgamma(static_cast<double>(n - (c - 1)) + 1) - static_cast<double>(n) * std::log(2.0));
        if (tail + pmf >= alpha) break;
        tail += pmf;
        --c;
    }
    return c;
}

ScenarioReport run_scenario(const Scenario& sc, const CampaignOptions& opt) {
    ScenarioReport rep;
    rep.name = sc.name;
    for (const auto& c : sc.campaigns) {
        SEReport r = run_campaign(c.cfg, opt);
        for (const auto& [s, d] : r.columns) {
            ColumnSummary col;
            col.label = label_of(c.cfg, s);
            col.campaign = c.name;
            col.scheme = s;
            col.direction = d;
            col.mean = r.mean(s, d);
            col.setup_means = r.setup_means(s, d);
            rep.columns.push_back(std::move(col));
        }
        rep.reports.emplace_back(c.name, std::move(r));
    }

    for (const auto& o : sc.orderings)
        rep.properties.push_back(sign_test(std::string(to_string(o.direction)) + " " + o.better + " >= " + o.worse,
                                           rep.column(o.better, o.direction), rep.column(o.worse, o.direction)));
    if (sc.check_genie_dominance)
        for (const auto& c : rep.columns)
            if (c.direction == Direction::Downlink)
                rep.properties.push_back(sign_test("dl-genie >= dl " + c.label,
                                                   rep.column(c.label, Direction::DownlinkGenie), c));
    for (const auto& h : sc.hardening) {
        auto ratio = [&](const std::string& label) {
            const double g = rep.column(label, Direction::DownlinkGenie).mean;
            return g > 0 ? rep.column(label, Direction::Downlink).mean / g : 0.0;
        };
        const double a = ratio(h.better), b = ratio(h.worse);
        PropertyResult p;
        p.name = "dl bound/genie " + h.better + " > " + h.worse;
        p.pass = a > b;
        p.detail = "ratios " + format_double(a) + " vs " + format_double(b);
        rep.properties.push_back(std::move(p));
    }
    for (const auto& q : sc.ratios) {
        const double num = rep.column(q.numerator, q.num_direction).mean;
        const double den = rep.column(q.denominator, q.den_direction).mean;
        const double ratio = den > 0 ? num / den : 0.0;
        PropertyResult p;
        p.name = q.name;
        p.pass = ratio >= q.lo && ratio <= q.hi;
        p.detail = "ratio " + format_double(ratio) + " expected in [" + format_double(q.lo) + ", " + format_double(q.hi) + "]";
        rep.properties.push_back(std::move(p));
    }
    return rep;
}

void emit_scenario(const ScenarioReport& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream summary(dir / "summary.csv", std::ios::binary | std::ios::trunc);
    if (!summary) throw std::runtime_error("cannot open " + (dir / "summary.csv").string());
    summary << "label,direction,mean_se\n";
    for (const auto& c : rep.columns) summary << c.label << ',' << to_string(c.direction) << ',' << format_double(c.mean) << '\n';

    std::ofstream props(dir / "properties.csv", std::ios::binary | std::ios::trunc);
    if (!props) throw std::runtime_error("cannot open " + (dir / "properties.csv").string());
    props << "property,pass,detail\n";
    for (const auto& p : rep.properties) props << '"' << p.name << "\"," << (p.pass ? "true" : "false") << ",\"" << p.detail << "\"\n";

    for (const auto& [name, r] : rep.reports) emit_results(r, dir / name);
}

}  // namespace cellfree
