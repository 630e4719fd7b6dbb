#include "cellfree/campaign.hpp"

#include "cellfree/power.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cellfree {

std::vector<double> SEReport::values(Scheme s, Direction d) const {
    std::vector<double> v;
    for (const auto& e : entries)
        if (e.scheme == s && e.direction == d) v.push_back(e.se);
    return v;
}

double SEReport::mean(Scheme s, Direction d) const {
    const auto v = values(s, d);
    if (v.empty()) throw std::out_of_range("SEReport::mean: no such column");
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

std::vector<double> SEReport::setup_means(Scheme s, Direction d) const {
    std::vector<double> sums(num_setups, 0.0);
    std::vector<std::size_t> counts(num_setups, 0);
    for (const auto& e : entries) {
        if (e.scheme != s || e.direction != d) continue;
        const std::size_t setup = e.ue / ues_per_setup;
        sums[setup] += e.se;
        ++counts[setup];
    }
    for (std::size_t i = 0; i < num_setups; ++i)
        if (counts[i]) sums[i] /= static_cast<double>(counts[i]);
    return sums;
}

bool SEReport::operator==(const SEReport& o) const {
    if (entries.size() != o.entries.size()) return false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& a = entries[i];
        const auto& b = o.entries[i];
        if (a.ue != b.ue || a.scheme != b.scheme || a.direction != b.direction || a.se != b.se ||
            a.std_error != b.std_error)
            return false;
    }
    return columns == o.columns && num_setups == o.num_setups && ues_per_setup == o.ues_per_setup && seed == o.seed &&
           config_hash == o.config_hash && config_text == o.config_text;
}

std::unique_ptr<SetupState> build_setup(const SimulationConfig& cfg, std::size_t index) {
    auto st = std::make_unique<SetupState>();
    Engine rng = make_engine(cfg.seed, {index, kTopologyStream});
    st->topo = build_topology(cfg, rng);
    const AccessPolicy policy = AccessPolicy::from_config(cfg);
    st->assign = cfg.serve_all ? serve_all_assignment(st->topo, cfg.pilot_len, policy)
                               : run_access(st->topo, cfg.pilot_len, policy);
    st->ue_power = ul_full_power(cfg);
    st->stats = std::make_unique<EstimationStatistics>(st->topo, st->assign, st->ue_power, cfg.noise_ul_w);
    st->ctx = make_context(st->topo, st->assign, *st->stats);
    return st;
}

EvaluationOptions evaluation_options(const SimulationConfig& cfg, const SetupState& setup, std::size_t index,
                                     std::size_t threads) {
    EvaluationOptions o;
    o.schemes = cfg.schemes;
    o.mode = cfg.mode;
    o.uplink = cfg.ul_data_len > 0;
    o.downlink = cfg.dl_data_len > 0;
    o.genie = cfg.genie && cfg.dl_data_len > 0;
    o.ul_prelog = cfg.ul_prelog();
    o.dl_prelog = cfg.dl_prelog();
    o.noise_dl = cfg.noise_dl_w;
    if (o.downlink || o.genie) {
        if (cfg.mode == Mode::Centralized)
            o.rho_ue = dl_centralized_equal(cfg);
        else
            o.rho_ap = dl_distributed_proportional(setup.assign, setup.topo, cfg.ap_power_w);
    }
    o.seed = cfg.seed;
    o.setup_index = index;
    o.num_realizations = cfg.num_realizations;
    o.threads = threads;
    return o;
}

SEReport run_campaign(const SimulationConfig& cfg, const CampaignOptions& opt) {
    validate(cfg);
    if (cfg.num_realizations == 0) throw std::invalid_argument("no realizations");
    SEReport rep;
    rep.num_setups = cfg.num_setups;
    rep.ues_per_setup = cfg.num_ues;
    rep.seed = cfg.seed;
    rep.config_hash = config_hash(cfg);
    rep.config_text = to_text(cfg);

    std::vector<Direction> dirs;
    if (cfg.ul_data_len > 0) dirs.push_back(Direction::Uplink);
    if (cfg.dl_data_len > 0) dirs.push_back(Direction::Downlink);
    if (cfg.dl_data_len > 0 && cfg.genie) dirs.push_back(Direction::DownlinkGenie);
    for (Scheme s : cfg.schemes)
        for (Direction d : dirs) rep.columns.emplace_back(s, d);

    // results[setup][scheme]
    std::vector<std::vector<SchemeResult>> results(cfg.num_setups);
    for (std::size_t s = 0; s < cfg.num_setups; ++s) {
        const auto setup = build_setup(cfg, s);
        try {
            results[s] = evaluate_setup(setup->ctx, evaluation_options(cfg, *setup, s, opt.threads));
        } catch (const NumericError& e) {
            throw NumericError(std::string("campaign: ") + e.what());
        }
        if (opt.progress) opt.progress(s + 1, cfg.num_setups);
    }

    const std::size_t K = cfg.num_ues;
    for (std::size_t c = 0; c < cfg.schemes.size(); ++c) {
        for (Direction d : dirs) {
            for (std::size_t s = 0; s < cfg.num_setups; ++s) {
                const SchemeResult& r = results[s][c];
                const std::vector<Estimate>& col = d == Direction::Uplink     ? r.ul
                                                   : d == Direction::Downlink ? r.dl
                                                                              : r.genie;
                for (std::size_t k = 0; k < K; ++k)
                    rep.entries.push_back({s * K + k, cfg.schemes[c], d, std::max(col[k].value, 0.0), col[k].std_error});
            }
        }
    }
    return rep;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string column_tag(Scheme s, Direction d) {
    std::string name(to_string(s));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return name + "_" + std::string(to_string(d));
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string hex64(std::uint64_t v) {
    std::ostringstream o;
    o << std::hex;
    o.width(16);
    o.fill('0');
    o << v;
    return o.str();
}

}  // namespace

void emit_results(const SEReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    std::string table = "ue,scheme,direction,se,stderr\n";
    for (const auto& e : report.entries) {
        table += std::to_string(e.ue);
        table += ',';
        table += to_string(e.scheme);
        table += ',';
        table += to_string(e.direction);
        table += ',';
        table += format_double(e.se);
        table += ',';
        table += format_double(e.std_error);
        table += '\n';
    }
    write_file(dir / "se.csv", table);

    nlohmann::ordered_json means = nlohmann::ordered_json::object();
    for (const auto& [s, d] : report.columns) {
        const CdfSamples cdf = cdf_statistics(report.values(s, d));
        std::string text = "se,cdf\n";
        for (std::size_t i = 0; i < cdf.values.size(); ++i)
            text += format_double(cdf.values[i]) + "," + format_double(cdf.levels[i]) + "\n";
        write_file(dir / ("cdf_" + column_tag(s, d) + ".csv"), text);
        means[column_tag(s, d)] = cdf.mean;
    }

    nlohmann::ordered_json meta;
    meta["seed"] = report.seed;
    meta["config_hash"] = hex64(report.config_hash);
    meta["num_setups"] = report.num_setups;
    meta["ues_per_setup"] = report.ues_per_setup;
    meta["mean_se"] = means;
    meta["config"] = report.config_text;
    write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

}  // namespace cellfree
