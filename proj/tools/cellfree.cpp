#include "cellfree/accounting.hpp"
#include "cellfree/campaign.hpp"
#include "cellfree/config.hpp"
#include "cellfree/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace cellfree;

namespace {

std::size_t default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

CampaignOptions campaign_options(std::size_t threads, bool quiet) {
    CampaignOptions o;
    o.threads = threads;
    if (!quiet)
        o.progress = [](std::size_t done, std::size_t total) {
            std::cerr << "\rsetup " << done << "/" << total << std::flush;
            if (done == total) std::cerr << '\n';
        };
    return o;
}

int simulate(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed,
             std::size_t threads, bool quiet) {
    SimulationConfig cfg = parse_config(config);
    if (seed) cfg.seed = *seed;
    const SEReport rep = run_campaign(cfg, campaign_options(threads, quiet));
    emit_results(rep, out);
    for (const auto& [s, d] : rep.columns)
        std::cout << to_string(s) << ' ' << to_string(d) << " mean SE " << format_double(rep.mean(s, d)) << '\n';
    return 0;
}

std::string complexity_table(const SimulationConfig& cfg, const SetupState& st) {
    std::ostringstream o;
    o << "ue,scheme,estimation,combining\n";
    const CostModel model(st.assign, cfg.antennas_per_ap);
    for (std::size_t k = 0; k < cfg.num_ues; ++k) {
        if (!st.assign.admitted(k)) continue;
        for (Scheme s : cfg.schemes) {
            const ComplexityCount c = model.count(s, k);
            o << k << ',' << to_string(s) << ',' << c.estimation << ',' << c.combining << '\n';
        }
    }
    return o.str();
}

std::string fronthaul_table(const SimulationConfig& cfg, const SetupState& st) {
    std::ostringstream o;
    o << "ap,mode,pilot,uplink,downlink,total\n";
    for (Mode m : {Mode::Centralized, Mode::Distributed}) {
        const auto loads = fronthaul_load(m, st.assign, cfg);
        for (std::size_t l = 0; l < loads.size(); ++l)
            o << l << ',' << to_string(m) << ',' << loads[l].pilot << ',' << loads[l].uplink << ','
              << loads[l].downlink << ',' << loads[l].total() << '\n';
    }
    return o.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    f << text;
}

int account(const std::string& config, const std::string& out, std::size_t setup) {
    const SimulationConfig cfg = parse_config(config);
    validate(cfg);
    const auto st = build_setup(cfg, setup);
    const std::string complexity = complexity_table(cfg, *st);
    if (out.empty()) {
        std::cout << complexity;
        return 0;
    }
    std::filesystem::create_directories(out);
    write_text(std::filesystem::path(out) / "complexity.csv", complexity);
    write_text(std::filesystem::path(out) / "fronthaul.csv", fronthaul_table(cfg, *st));
    return 0;
}

int bench(const std::string& name, bool full_scale, const std::string& out, std::size_t threads,
          const ScenarioOverrides& ov, bool quiet) {
    const Scenario sc = make_scenario(name, ov);
    if (sc.full_scale && !full_scale) {
        std::cerr << "scenario '" << name << "' runs for hours; pass --full-scale to run it\n";
        return 2;
    }
    std::cout << sc.name << ": " << sc.description << '\n';
    const ScenarioReport rep = run_scenario(sc, campaign_options(threads, quiet));
    if (!out.empty()) emit_scenario(rep, out);
    for (const auto& c : rep.columns)
        std::cout << "  " << c.label << ' ' << to_string(c.direction) << " mean SE " << format_double(c.mean) << '\n';
    for (const auto& p : rep.properties)
        std::cout << (p.pass ? "PASS " : "FAIL ") << p.name << ": " << p.detail << '\n';
    return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scalable cell-free massive MIMO simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "No progress output");

    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::size_t threads = default_threads();
    auto* sim = app.add_subcommand("simulate", "Run a Monte-Carlo campaign and write per-UE SE files");
    sim->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out, "Output directory")->required();
    sim->add_option("--seed", seed, "Override the configured seed");
    sim->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    std::size_t setup = 0;
    auto* acc = app.add_subcommand("account", "Fronthaul and complexity tables for one setup");
    acc->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
    acc->add_option("--out", out, "Write complexity.csv and fronthaul.csv here instead of stdout");
    acc->add_option("--setup", setup, "Setup index");

    std::string scenario;
    bool full_scale = false;
    ScenarioOverrides ov;
    auto* bn = app.add_subcommand("bench", "Run a named scenario and check its expected properties");
    bn->add_option("--scenario", scenario, "Scenario name")->required();
    bn->add_flag("--full-scale", full_scale, "Allow the multi-hour full-size scenarios");
    bn->add_option("--out", out, "Output directory");
    bn->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    bn->add_option("--seed", ov.seed, "Override the scenario seed");
    bn->add_option("--setups", ov.num_setups, "Override the number of setups");
    bn->add_option("--realizations", ov.num_realizations, "Override the realizations per setup");

    auto* list = app.add_subcommand("scenarios", "List scenario names");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sim) return simulate(config, out, seed, threads, quiet);
        if (*acc) return account(config, out, setup);
        if (*bn) return bench(scenario, full_scale, out, threads, ov, quiet);
        if (*list) {
            for (const auto& n : scenario_names()) std::cout << n << ": " << make_scenario(n).description << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
