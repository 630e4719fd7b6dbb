#include "cellfree/accounting.hpp"
#include "cellfree/campaign.hpp"
#include "cellfree/config.hpp"
#include "cellfree/dcc.hpp"
#include "cellfree/performance.hpp"
#include "cellfree/power.hpp"
#include "cellfree/scenarios.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace cellfree;

namespace {

std::vector<std::string> scheme_names(const std::vector<Scheme>& v) {
    std::vector<std::string> out;
    for (Scheme s : v) out.emplace_back(to_string(s));
    return out;
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& v) {
    std::vector<Scheme> out;
    for (const auto& s : v) out.push_back(parse_scheme(s));
    return out;
}

std::vector<std::vector<std::size_t>> as_lists(const std::vector<std::set<std::size_t>>& sets) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
    return out;
}

py::dict report_dict(const SEReport& r) {
    const std::size_t n = r.entries.size();
    py::array_t<std::uint64_t> ue(static_cast<py::ssize_t>(n));
    py::array_t<double> se(static_cast<py::ssize_t>(n)), err(static_cast<py::ssize_t>(n));
    py::list scheme, direction;
    auto u = ue.mutable_unchecked<1>();
    auto s = se.mutable_unchecked<1>();
    auto e = err.mutable_unchecked<1>();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = r.entries[i];
        u(static_cast<py::ssize_t>(i)) = x.ue;
        s(static_cast<py::ssize_t>(i)) = x.se;
        e(static_cast<py::ssize_t>(i)) = x.std_error;
        scheme.append(std::string(to_string(x.scheme)));
        direction.append(std::string(to_string(x.direction)));
    }
    py::dict means;
    for (const auto& [sc, d] : r.columns) means[py::str(column_tag(sc, d))] = r.mean(sc, d);
    py::dict out;
    out["ue"] = ue;
    out["scheme"] = scheme;
    out["direction"] = direction;
    out["se"] = se;
    out["stderr"] = err;
    out["mean_se"] = means;
    out["num_setups"] = r.num_setups;
    out["ues_per_setup"] = r.ues_per_setup;
    out["seed"] = r.seed;
    out["config_hash"] = r.config_hash;
    return out;
}

std::vector<py::dict> fronthaul_dicts(const std::vector<FronthaulLoad>& loads) {
    std::vector<py::dict> out;
    for (const auto& f : loads) {
        py::dict d;
        d["pilot"] = f.pilot;
        d["uplink"] = f.uplink;
        d["downlink"] = f.downlink;
        d["total"] = f.total();
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Scalable cell-free massive MIMO simulation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<AdmissionError>(m, "AdmissionError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    py::class_<SimulationConfig>(m, "Config")
        .def(py::init<>())
        .def_readwrite("num_aps", &SimulationConfig::num_aps)
        .def_readwrite("antennas_per_ap", &SimulationConfig::antennas_per_ap)
        .def_readwrite("num_ues", &SimulationConfig::num_ues)
        .def_readwrite("area_side_km", &SimulationConfig::area_side_km)
        .def_readwrite("coherence_len", &SimulationConfig::coherence_len)
        .def_readwrite("pilot_len", &SimulationConfig::pilot_len)
        .def_readwrite("ul_data_len", &SimulationConfig::ul_data_len)
        .def_readwrite("dl_data_len", &SimulationConfig::dl_data_len)
        .def_readwrite("ue_power_w", &SimulationConfig::ue_power_w)
        .def_readwrite("ap_power_w", &SimulationConfig::ap_power_w)
        .def_readwrite("noise_ul_w", &SimulationConfig::noise_ul_w)
        .def_readwrite("noise_dl_w", &SimulationConfig::noise_dl_w)
        .def_readwrite("neighbor_radius_km", &SimulationConfig::neighbor_radius_km)
        .def_readwrite("neighbor_cap", &SimulationConfig::neighbor_cap)
        .def_readwrite("serve_all", &SimulationConfig::serve_all)
        .def_readwrite("seed", &SimulationConfig::seed)
        .def_readwrite("num_setups", &SimulationConfig::num_setups)
        .def_readwrite("num_realizations", &SimulationConfig::num_realizations)
        .def_readwrite("genie", &SimulationConfig::genie)
        .def_property(
            "schemes", [](const SimulationConfig& c) { return scheme_names(c.schemes); },
            [](SimulationConfig& c, const std::vector<std::string>& v) { c.schemes = parse_schemes(v); })
        .def_property(
            "mode", [](const SimulationConfig& c) { return std::string(to_string(c.mode)); },
            [](SimulationConfig& c, const std::string& v) { c.mode = parse_mode(v); })
        .def("validate", [](const SimulationConfig& c) { validate(c); })
        .def("to_text", [](const SimulationConfig& c) { return to_text(c); })
        .def("hash", [](const SimulationConfig& c) { return config_hash(c); })
        .def("__eq__", [](const SimulationConfig& a, const SimulationConfig& b) { return a == b; })
        .def("__repr__", [](const SimulationConfig& c) { return "<Config hash=" + std::to_string(config_hash(c)) + ">"; });

    m.def("parse_config_text", [](const std::string& t) { return parse_config_text(t); }, py::arg("text"));
    m.def("parse_config", [](const std::filesystem::path& p) { return parse_config(p); }, py::arg("path"));
    m.def("dbm_to_watt", &dbm_to_watt);

    py::class_<SetupState, std::unique_ptr<SetupState>>(m, "Setup")
        .def_property_readonly("beta", [](const SetupState& s) { return s.topo.beta_matrix(); })
        .def_property_readonly("pilot_len", [](const SetupState& s) { return s.assign.pilot_len; })
        .def_property_readonly("pilot_of", [](const SetupState& s) { return s.assign.pilot_of; })
        .def_property_readonly("master_of", [](const SetupState& s) { return s.assign.master_of; })
        .def_property_readonly("serving_aps", [](const SetupState& s) { return as_lists(s.assign.serving_aps); })
        .def_property_readonly("served_by_ap", [](const SetupState& s) { return as_lists(s.assign.served_by_ap); })
        .def_property_readonly("partners", [](const SetupState& s) { return compute_partners(s.assign); })
        .def("check_invariants", [](const SetupState& s) { return check_invariants(s.assign); })
        .def(
            "fronthaul",
            [](const SetupState& s, const std::string& mode, const SimulationConfig& cfg) {
                return fronthaul_dicts(fronthaul_load(parse_mode(mode), s.assign, cfg));
            },
            py::arg("mode"), py::arg("config"))
        .def(
            "multiplications",
            [](const SetupState& s, const std::string& scheme, std::size_t ue) {
                const ComplexityCount c = multiplication_count(parse_scheme(scheme), ue, s.assign, s.topo.antennas());
                return std::make_pair(c.estimation, c.combining);
            },
            py::arg("scheme"), py::arg("ue"))
        .def(
            "ul_se_mr_closed_form", [](const SetupState& s, double prelog) { return ul_se_mr_closed_form(s.ctx, prelog); },
            py::arg("prelog"))
        .def(
            "dl_se_mr_closed_form",
            [](const SetupState& s, double ap_power, double prelog) {
                return dl_se_mr_closed_form(s.ctx, dl_distributed_proportional(s.assign, s.topo, ap_power), prelog);
            },
            py::arg("ap_power"), py::arg("prelog"))
        .def(
            "mr_duality_power",
            [](const SetupState& s, double noise_ul, double noise_dl) {
                return duality_power(ul_mr_closed_form_moments(s.ctx), s.ue_power, noise_ul, noise_dl).rho;
            },
            py::arg("noise_ul"), py::arg("noise_dl"));

    m.def("build_setup", &build_setup, py::arg("config"), py::arg("index") = 0);

    m.def(
        "run_campaign",
        [](const SimulationConfig& cfg, std::size_t threads, const std::optional<std::filesystem::path>& out) {
            SEReport r;
            {
                py::gil_scoped_release release;
                r = run_campaign(cfg, {threads, {}});
                if (out) emit_results(r, *out);
            }
            return report_dict(r);
        },
        py::arg("config"), py::arg("threads") = 1, py::arg("out") = py::none());

    m.def("scenario_names", &scenario_names);
    m.def(
        "run_scenario",
        [](const std::string& name, std::optional<std::uint64_t> seed, std::optional<std::size_t> setups,
           std::optional<std::size_t> realizations, std::size_t threads, const std::optional<std::filesystem::path>& out) {
            const Scenario sc = make_scenario(name, {seed, setups, realizations});
            ScenarioReport rep;
            {
                py::gil_scoped_release release;
                rep = run_scenario(sc, {threads, {}});
                if (out) emit_scenario(rep, *out);
            }
            py::list cols, props;
            for (const auto& c : rep.columns) {
                py::dict d;
                d["label"] = c.label;
                d["campaign"] = c.campaign;
                d["direction"] = std::string(to_string(c.direction));
                d["mean_se"] = c.mean;
                d["setup_means"] = c.setup_means;
                cols.append(d);
            }
            for (const auto& p : rep.properties) {
                py::dict d;
                d["name"] = p.name;
                d["pass"] = p.pass;
                d["detail"] = p.detail;
                props.append(d);
            }
            py::dict out_d;
            out_d["name"] = rep.name;
            out_d["columns"] = cols;
            out_d["properties"] = props;
            out_d["passed"] = rep.passed();
            return out_d;
        },
        py::arg("name"), py::arg("seed") = py::none(), py::arg("setups") = py::none(),
        py::arg("realizations") = py::none(), py::arg("threads") = 1, py::arg("out") = py::none());

    m.def("sign_test_threshold", &sign_test_threshold, py::arg("n"), py::arg("alpha") = 0.05);
}
