#include "spdiff/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace spdiff {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config schema error at " + where + ": " + what);
}

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed,
                const std::set<std::string>& required) {
    if (!j.is_object()) schema_error(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            schema_error(where + "/" + it.key(), "unknown key");
    for (const auto& k : required)
        if (!j.contains(k))
            schema_error(where + "/" + k, "missing required key");
}

double num_at(const json& j, const std::string& where, const std::string& key,
              bool required = true, double fallback = 0.0) {
    if (!j.contains(key)) {
        if (required) schema_error(where + "/" + key, "missing required key");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number()) schema_error(where + "/" + key, "expected a number");
    return v.get<double>();
}

bool bool_at(const json& j, const std::string& where, const std::string& key,
             bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) schema_error(where + "/" + key, "expected a boolean");
    return j.at(key).get<bool>();
}

} // namespace

ScenarioConfig parse_config(const json& doc_in) {
    // accept a metadata sidecar transparently
    const json& doc = (doc_in.is_object() && doc_in.contains("config"))
                          ? doc_in.at("config") : doc_in;

    check_keys(doc, "",
        {"units", "species", "laser", "dilaton", "channels", "packet",
         "pulse", "engine", "grid", "sweep"},
        {"units", "species", "laser", "packet", "pulse"});

    const json& ju = doc.at("units");
    check_keys(ju, "/units",
        {"time_scale_s", "momentum_scale_kg_m_per_s", "length_scale_m",
         "speed_of_light_m_per_s", "grav_accel_m_per_s2"},
        {"time_scale_s", "momentum_scale_kg_m_per_s", "length_scale_m",
         "speed_of_light_m_per_s", "grav_accel_m_per_s2"});
    UnitSystem units(num_at(ju, "/units", "time_scale_s"),
                     num_at(ju, "/units", "momentum_scale_kg_m_per_s"),
                     num_at(ju, "/units", "length_scale_m"),
                     num_at(ju, "/units", "speed_of_light_m_per_s"),
                     num_at(ju, "/units", "grav_accel_m_per_s2"));

    ScenarioConfig cfg;
    cfg.units = units;
    Scenario& s = cfg.scenario;
    s.c = units.c_internal();
    s.g = units.g_internal();

    const double mass_scale = units.momentum_scale * units.time_scale / units.length_scale;
    const double freq = 1.0 / units.scale_for(Dim::Frequency);
    (void)freq;
    auto f = [&](double v) { return units.nondimensionalize(v, Dim::Frequency); };
    auto acc = [&](double v) { return units.nondimensionalize(v, Dim::Acceleration); };
    auto mom = [&](double v) { return units.nondimensionalize(v, Dim::Momentum); };
    auto len = [&](double v) { return units.nondimensionalize(v, Dim::Length); };

    const json& js = doc.at("species");
    check_keys(js, "/species",
        {"mean_mass_kg", "transition_frequency_rad_per_s",
         "mean_frequency_rad_per_s", "beta_e", "beta_g"},
        {"mean_mass_kg", "transition_frequency_rad_per_s",
         "mean_frequency_rad_per_s"});
    s.species.mbar = num_at(js, "/species", "mean_mass_kg") / mass_scale;
    s.species.omega_eg = f(num_at(js, "/species", "transition_frequency_rad_per_s"));
    s.species.omega_bar = f(num_at(js, "/species", "mean_frequency_rad_per_s"));
    s.species.beta_e = num_at(js, "/species", "beta_e", false, 0.0);
    s.species.beta_g = num_at(js, "/species", "beta_g", false, 0.0);

    const json& jl = doc.at("laser");
    check_keys(jl, "/laser",
        {"mode", "chirp_rate_m_per_s2", "phase_offset_rad",
         "direct_rabi_rad_per_s", "rabi_electric_rad_per_s",
         "rabi_magnetic_rad_per_s", "ancilla_detuning_rad_per_s"},
        {"mode"});
    std::string mode = jl.at("mode").is_string() ? jl.at("mode").get<std::string>() : "";
    if (mode != "direct" && mode != "magnetic")
        schema_error("/laser/mode", "expected \"direct\" or \"magnetic\"");
    cfg.direct_mode = (mode == "direct");
    s.laser.alpha = acc(num_at(jl, "/laser", "chirp_rate_m_per_s2", false, 0.0));
    s.laser.phi0 = num_at(jl, "/laser", "phase_offset_rad", false, 0.0);
    if (cfg.direct_mode) {
        s.eff = EffectiveCouplings::direct(
            f(num_at(jl, "/laser", "direct_rabi_rad_per_s")));
    } else {
        s.laser.Omega_E = f(num_at(jl, "/laser", "rabi_electric_rad_per_s"));
        s.laser.Omega_B = f(num_at(jl, "/laser", "rabi_magnetic_rad_per_s"));
        s.laser.Delta   = f(num_at(jl, "/laser", "ancilla_detuning_rad_per_s"));
        s.eff = EffectiveCouplings::from_lambda(s.laser.Omega_E, s.laser.Omega_B,
                                                s.laser.Delta);
    }

    if (doc.contains("dilaton")) {
        const json& jd = doc.at("dilaton");
        check_keys(jd, "/dilaton",
            {"amplitude", "frequency_rad_per_s", "wavenumber_rad_per_m",
             "phase_rad", "eep_coefficient"}, {});
        s.dil.rho0 = num_at(jd, "/dilaton", "amplitude", false, 0.0);
        s.dil.omega_rho = f(num_at(jd, "/dilaton", "frequency_rad_per_s", false, 0.0));
        s.dil.k_rho = num_at(jd, "/dilaton", "wavenumber_rad_per_m", false, 0.0)
                      * units.length_scale;
        s.dil.phi_rho = num_at(jd, "/dilaton", "phase_rad", false, 0.0);
        s.dil.beta_S = num_at(jd, "/dilaton", "eep_coefficient", false, 0.0);
    }

    if (doc.contains("channels")) {
        const json& jc = doc.at("channels");
        check_keys(jc, "/channels", {"dm", "ep", "md", "wv"}, {});
        s.ch.dm = bool_at(jc, "/channels", "dm", false);
        s.ch.ep = bool_at(jc, "/channels", "ep", false);
        s.ch.md = bool_at(jc, "/channels", "md", false);
        s.ch.wv = bool_at(jc, "/channels", "wv", false);
    }

    const json& jp = doc.at("pulse");
    check_keys(jp, "/pulse", {"area_rad", "resonant_momentum_kg_m_per_s"},
               {"resonant_momentum_kg_m_per_s"});
    cfg.pulse_area = num_at(jp, "/pulse", "area_rad", false, M_PI);
    s.setup_resonance(mom(num_at(jp, "/pulse", "resonant_momentum_kg_m_per_s")));

    const json& jw = doc.at("packet");
    check_keys(jw, "/packet",
        {"sigma_e_per_m", "sigma_g_per_m", "z_e_m", "z_g_m",
         "p_e_kg_m_per_s", "p_g_kg_m_per_s"},
        {"sigma_e_per_m", "sigma_g_per_m", "z_e_m", "z_g_m"});
    cfg.packet.sigma_e = num_at(jw, "/packet", "sigma_e_per_m") * units.length_scale;
    cfg.packet.sigma_g = num_at(jw, "/packet", "sigma_g_per_m") * units.length_scale;
    cfg.packet.z_e = len(num_at(jw, "/packet", "z_e_m"));
    cfg.packet.z_g = len(num_at(jw, "/packet", "z_g_m"));
    // default packet momenta: lab-frame centers of the resonant pair
    cfg.packet.p_e = jw.contains("p_e_kg_m_per_s")
        ? mom(num_at(jw, "/packet", "p_e_kg_m_per_s"))
        : s.p_r + 0.5 * s.laser.k;
    cfg.packet.p_g = jw.contains("p_g_kg_m_per_s")
        ? mom(num_at(jw, "/packet", "p_g_kg_m_per_s"))
        : s.p_r - 0.5 * s.laser.k;
    cfg.packet.validate();

    if (doc.contains("engine")) {
        const std::string e = doc.at("engine").is_string()
            ? doc.at("engine").get<std::string>() : "";
        if (e == "analytic") cfg.engine = Engine::analytic;
        else if (e == "oracle") cfg.engine = Engine::oracle;
        else if (e == "both") cfg.engine = Engine::both;
        else schema_error("/engine", "expected \"analytic\", \"oracle\" or \"both\"");
    }

    if (doc.contains("grid")) {
        const json& jg = doc.at("grid");
        check_keys(jg, "/grid", {"points", "steps", "extent_m"}, {});
        if (jg.contains("points")) cfg.grid.points = jg.at("points").get<std::size_t>();
        if (jg.contains("steps")) cfg.grid.steps = jg.at("steps").get<std::size_t>();
        cfg.grid.extent = len(num_at(jg, "/grid", "extent_m", false, 0.0));
    }

    if (doc.contains("sweep")) {
        const json& jsw = doc.at("sweep");
        check_keys(jsw, "/sweep", {"parameter", "from", "to", "count"},
                   {"parameter", "from", "to", "count"});
        cfg.sweep.parameter = jsw.at("parameter").get<std::string>();
        cfg.sweep.from = num_at(jsw, "/sweep", "from");
        cfg.sweep.to = num_at(jsw, "/sweep", "to");
        cfg.sweep.count = jsw.at("count").get<std::size_t>();
        if (cfg.sweep.count < 2) schema_error("/sweep/count", "need at least 2 points");
    }

    s.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_config(doc);
}

json serialize_config(const ScenarioConfig& cfg) {
    const UnitSystem& u = cfg.units;
    const Scenario& s = cfg.scenario;
    const double mass_scale = u.momentum_scale * u.time_scale / u.length_scale;
    auto f = [&](double v) { return u.redimensionalize(v, Dim::Frequency); };

    json doc;
    doc["units"] = {
        {"time_scale_s", u.time_scale},
        {"momentum_scale_kg_m_per_s", u.momentum_scale},
        {"length_scale_m", u.length_scale},
        {"speed_of_light_m_per_s", u.speed_of_light},
        {"grav_accel_m_per_s2", u.grav_accel},
    };
    doc["species"] = {
        {"mean_mass_kg", s.species.mbar * mass_scale},
        {"transition_frequency_rad_per_s", f(s.species.omega_eg)},
        {"mean_frequency_rad_per_s", f(s.species.omega_bar)},
        {"beta_e", s.species.beta_e},
        {"beta_g", s.species.beta_g},
    };
    doc["laser"] = {
        {"mode", cfg.direct_mode ? "direct" : "magnetic"},
        {"chirp_rate_m_per_s2", u.redimensionalize(s.laser.alpha, Dim::Acceleration)},
        {"phase_offset_rad", s.laser.phi0},
    };
    if (cfg.direct_mode) {
        doc["laser"]["direct_rabi_rad_per_s"] = f(s.eff.Omega);
    } else {
        doc["laser"]["rabi_electric_rad_per_s"] = f(s.laser.Omega_E);
        doc["laser"]["rabi_magnetic_rad_per_s"] = f(s.laser.Omega_B);
        doc["laser"]["ancilla_detuning_rad_per_s"] = f(s.laser.Delta);
    }
    doc["dilaton"] = {
        {"amplitude", s.dil.rho0},
        {"frequency_rad_per_s", f(s.dil.omega_rho)},
        {"wavenumber_rad_per_m", s.dil.k_rho / u.length_scale},
        {"phase_rad", s.dil.phi_rho},
        {"eep_coefficient", s.dil.beta_S},
    };
    doc["channels"] = {
        {"dm", s.ch.dm}, {"ep", s.ch.ep}, {"md", s.ch.md}, {"wv", s.ch.wv}};
    doc["packet"] = {
        {"sigma_e_per_m", cfg.packet.sigma_e / u.length_scale},
        {"sigma_g_per_m", cfg.packet.sigma_g / u.length_scale},
        {"z_e_m", u.redimensionalize(cfg.packet.z_e, Dim::Length)},
        {"z_g_m", u.redimensionalize(cfg.packet.z_g, Dim::Length)},
        {"p_e_kg_m_per_s", u.redimensionalize(cfg.packet.p_e, Dim::Momentum)},
        {"p_g_kg_m_per_s", u.redimensionalize(cfg.packet.p_g, Dim::Momentum)},
    };
    doc["pulse"] = {
        {"area_rad", cfg.pulse_area},
        {"resonant_momentum_kg_m_per_s", u.redimensionalize(s.p_r, Dim::Momentum)},
    };
    doc["engine"] = (cfg.engine == Engine::analytic) ? "analytic"
                  : (cfg.engine == Engine::oracle) ? "oracle" : "both";
    doc["grid"] = {
        {"points", cfg.grid.points},
        {"steps", cfg.grid.steps},
        {"extent_m", u.redimensionalize(cfg.grid.extent, Dim::Length)},
    };
    if (cfg.sweep.count > 0)
        doc["sweep"] = {
            {"parameter", cfg.sweep.parameter},
            {"from", cfg.sweep.from},
            {"to", cfg.sweep.to},
            {"count", cfg.sweep.count},
        };
    return doc;
}

std::vector<GuardStatus> evaluate_guards(const ScenarioConfig& cfg, bool strict) {
    std::vector<GuardStatus> out;
    const Scenario& s = cfg.scenario;
    const double Om = std::abs(s.Omega());
    auto add = [&](const std::string& name, bool ok, const std::string& msg) {
        out.push_back({name, ok, ok ? "ok" : msg});
    };

    add("dilaton_amplitude", !s.ch.dm || s.dil.amplitude_ok(),
        "dilaton amplitude rho0 outside the perturbative guard");
    if (!cfg.direct_mode) {
        const bool ok = s.laser.Delta != 0.0
            && std::abs(s.laser.Omega_E / s.laser.Delta) < 0.1
            && std::abs(s.laser.Omega_B / s.laser.Delta) < 0.1;
        add("elimination_ratio", ok, "|Omega_{E,B}/Delta| >= 0.1");
        if (s.laser.Omega_E != 0.0)
            add("rwa_ratio", s.laser.rwa_validity(0.0, 0.0, s.c) > 10.0,
                "RWA ratio |dphi_L/dt|/Omega_E <= 10");
    }
    if (s.ch.dm) {
        add("dm_freeze_frequency", s.dil.omega_rho / Om < 0.1,
            "omega_rho/Omega not small; DM freeze invalid");
        add("dm_freeze_doppler",
            s.dil.k_rho * std::abs(cfg.packet.p_g) / (s.species.mbar * Om) < 0.1
                && s.dil.k_rho * std::abs(s.g) / (Om * Om) < 0.1,
            "DM wavenumber resolves packet motion during the pulse");
        add("dm_gradient_width",
            s.dil.k_rho < 0.1 * std::min(cfg.packet.sigma_e, cfg.packet.sigma_g),
            "k_rho not small against the packet momentum width");
    }
    add("mass_ratio", s.species.omega_bar <= 0.0
            || s.species.omega_eg / s.species.omega_bar < 1e-3,
        "omega_eg/omega_bar exceeds the perturbative guard");
    if (std::abs(cfg.pulse_area - M_PI) > 1e-12
        && std::abs(cfg.pulse_area - 0.5 * M_PI) > 1e-12)
        add("pulse_area", false,
            "pulse area is neither pi nor pi/2; expansion uncertified");

    if (strict)
        for (const auto& gd : out)
            if (!gd.ok)
                throw std::runtime_error("strict guard violation [" + gd.name + "]: "
                                         + gd.message);
    return out;
}

} // namespace spdiff
