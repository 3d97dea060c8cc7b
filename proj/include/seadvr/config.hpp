// Plain-text experiment configuration: INI-style sections with key = value
// pairs, '#' comments, comma-separated lists. Units are fixed by the schema
// (depths m, frequencies Hz, speeds m/s, densities g/cm^3, SNR dB).
#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seadvr/env.hpp"

namespace seadvr {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    EnvironmentModel env;

    // [source]
    double source_depth = 99.0;  // m

    // [array] — give hydrophones (+ optional spacing) or j_max (+ optional L_eff)
    int hydrophones = 0;
    double spacing = 0.0;  // m; 0 = derive from j_max and L
    int j_max = 0;         // 0 = derive as hydrophones * L / h rounded
    double L_eff = 0.0;    // m; 0 = env.L

    // [sweep]
    std::string sweep_kind = "frequency";  // frequency | spacing
    double sweep_lo = 10.0, sweep_hi = 800.0, sweep_step = 5.0;

    // [experiment]
    std::vector<double> ranges = {10000.0};  // m
    double frequency = 0.0;                  // Hz; single-point operations
    std::string mode_selection = "all";      // all | trapped

    // [noise]
    bool noise_enabled = false;
    std::vector<double> snr_db = {10.0};
    double varsigma = 0.0;  // displacement r.m.s. (m)
    int realizations = 1;
    std::uint64_t seed = 1;
    bool complex_noise = true;

    // [pulse]
    std::vector<double> center_freqs = {240.0};  // Hz
    double time_lo = 0.0, time_hi = 0.0;         // s; 0/0 = auto window
    int n_freq = 512, n_time = 2048;

    // [output]
    std::string out_dir = ".";
    int threads = 1;

    void validate() const {
        try {
            env.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        if (!(source_depth > 0.0 && source_depth < env.h))
            throw config_error("source depth must lie strictly inside the water column");
        if (hydrophones <= 0 && j_max <= 0)
            throw config_error("array: give hydrophones or j_max");
        if (sweep_kind != "frequency" && sweep_kind != "spacing")
            throw config_error("sweep kind must be frequency or spacing");
        if (!(sweep_lo > 0.0) || !(sweep_hi > sweep_lo) || !(sweep_step > 0.0))
            throw config_error("sweep grid must be ascending and positive");
        if (ranges.empty()) throw config_error("at least one range required");
        for (double r : ranges)
            if (!(r > 0.0)) throw config_error("ranges must be positive");
        if (mode_selection != "all" && mode_selection != "trapped")
            throw config_error("mode_selection must be all or trapped");
        if (realizations < 1) throw config_error("realizations >= 1 required");
        if (varsigma < 0.0) throw config_error("varsigma >= 0 required");
        if (noise_enabled && seed == 0) throw config_error("seed required when noise enabled");
        if (n_freq < 64) throw config_error("n_freq >= 64 required");
        if (n_time < 2) throw config_error("n_time >= 2 required");
    }

    /// Resolved DVR truncation: j_max explicit, else hydrophones mapped through
    /// J = floor(j_max h / L) inverted as j_max = round(J L / h).
    int resolved_j_max() const {
        if (j_max > 0) return j_max;
        return static_cast<int>(std::llround(hydrophones * env.L / env.h));
    }

    double resolved_L_eff() const { return L_eff > 0.0 ? L_eff : env.L; }

    int resolved_hydrophones() const {
        if (hydrophones > 0) return hydrophones;
        return static_cast<int>(std::floor(resolved_j_max() * env.h / resolved_L_eff()));
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using KvMap = std::map<std::string, std::string>;

inline std::map<std::string, KvMap> parse_ini(std::istream& in) {
    std::map<std::string, KvMap> sections;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(line_no) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            sections[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("line " + std::to_string(line_no) + ": empty key");
        sections[section][key] = val;
    }
    return sections;
}

inline double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw config_error("bad numeric value for " + key + ": '" + s + "'");
    }
}

inline std::vector<double> to_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty()) throw config_error("empty list for " + key);
    return out;
}

inline bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw config_error("bad boolean for " + key + ": '" + s + "'");
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
    auto sections = detail::parse_ini(in);
    ExperimentConfig c;

    auto fetch = [&](const std::string& sec, const std::string& key, auto&& apply) {
        auto s = sections.find(sec);
        if (s == sections.end()) return;
        auto k = s->second.find(key);
        if (k == s->second.end()) return;
        apply(k->second);
        s->second.erase(k);
    };
    auto num = [&](const std::string& sec, const std::string& key, double& dst) {
        fetch(sec, key, [&](const std::string& v) { dst = detail::to_double(v, key); });
    };
    auto integer = [&](const std::string& sec, const std::string& key, int& dst) {
        fetch(sec, key, [&](const std::string& v) {
            dst = static_cast<int>(std::llround(detail::to_double(v, key)));
        });
    };

    num("environment", "c0", c.env.c0);
    num("environment", "delta_c", c.env.delta_c);
    num("environment", "z_c", c.env.z_c);
    num("environment", "delta_z", c.env.delta_z);
    num("environment", "c_b", c.env.c_b);
    num("environment", "h", c.env.h);
    num("environment", "L", c.env.L);
    num("environment", "rho_wat", c.env.rho_wat);
    num("environment", "rho_sed", c.env.rho_sed);
    num("environment", "att_coeff", c.env.att_coeff);

    num("source", "depth", c.source_depth);

    integer("array", "hydrophones", c.hydrophones);
    num("array", "spacing", c.spacing);
    integer("array", "j_max", c.j_max);
    num("array", "L_eff", c.L_eff);

    fetch("sweep", "kind", [&](const std::string& v) { c.sweep_kind = v; });
    num("sweep", "lo", c.sweep_lo);
    num("sweep", "hi", c.sweep_hi);
    num("sweep", "step", c.sweep_step);

    fetch("experiment", "ranges",
          [&](const std::string& v) { c.ranges = detail::to_list(v, "ranges"); });
    num("experiment", "frequency", c.frequency);
    fetch("experiment", "mode_selection",
          [&](const std::string& v) { c.mode_selection = v; });

    fetch("noise", "enabled",
          [&](const std::string& v) { c.noise_enabled = detail::to_bool(v, "enabled"); });
    fetch("noise", "snr_db",
          [&](const std::string& v) { c.snr_db = detail::to_list(v, "snr_db"); });
    num("noise", "varsigma", c.varsigma);
    integer("noise", "realizations", c.realizations);
    fetch("noise", "seed", [&](const std::string& v) {
        c.seed = static_cast<std::uint64_t>(std::stoull(v));
    });
    fetch("noise", "complex_noise",
          [&](const std::string& v) { c.complex_noise = detail::to_bool(v, "complex_noise"); });

    fetch("pulse", "center_freqs",
          [&](const std::string& v) { c.center_freqs = detail::to_list(v, "center_freqs"); });
    num("pulse", "time_lo", c.time_lo);
    num("pulse", "time_hi", c.time_hi);
    integer("pulse", "n_freq", c.n_freq);
    integer("pulse", "n_time", c.n_time);

    fetch("output", "dir", [&](const std::string& v) { c.out_dir = v; });
    integer("output", "threads", c.threads);

    for (const auto& [sec, kv] : sections)
        for (const auto& [key, val] : kv)
            throw config_error("unknown key '" + key + "' in section [" + sec + "]");

    c.validate();
    return c;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    auto list = [](const std::vector<double>& v) {
        std::ostringstream s;
        s.precision(17);
        for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
        return s.str();
    };
    out << "[environment]\n"
        << "c0 = " << c.env.c0 << "\ndelta_c = " << c.env.delta_c << "\nz_c = " << c.env.z_c
        << "\ndelta_z = " << c.env.delta_z << "\nc_b = " << c.env.c_b << "\nh = " << c.env.h
        << "\nL = " << c.env.L << "\nrho_wat = " << c.env.rho_wat
        << "\nrho_sed = " << c.env.rho_sed << "\natt_coeff = " << c.env.att_coeff << "\n\n";
    out << "[source]\ndepth = " << c.source_depth << "\n\n";
    out << "[array]\n";
    if (c.hydrophones > 0) out << "hydrophones = " << c.hydrophones << "\n";
    if (c.spacing > 0.0) out << "spacing = " << c.spacing << "\n";
    if (c.j_max > 0) out << "j_max = " << c.j_max << "\n";
    if (c.L_eff > 0.0) out << "L_eff = " << c.L_eff << "\n";
    out << "\n[sweep]\nkind = " << c.sweep_kind << "\nlo = " << c.sweep_lo
        << "\nhi = " << c.sweep_hi << "\nstep = " << c.sweep_step << "\n\n";
    out << "[experiment]\nranges = " << list(c.ranges) << "\n";
    if (c.frequency > 0.0) out << "frequency = " << c.frequency << "\n";
    out << "mode_selection = " << c.mode_selection << "\n\n";
    out << "[noise]\nenabled = " << (c.noise_enabled ? "true" : "false")
        << "\nsnr_db = " << list(c.snr_db) << "\nvarsigma = " << c.varsigma
        << "\nrealizations = " << c.realizations << "\nseed = " << c.seed
        << "\ncomplex_noise = " << (c.complex_noise ? "true" : "false") << "\n\n";
    out << "[pulse]\ncenter_freqs = " << list(c.center_freqs) << "\ntime_lo = " << c.time_lo
        << "\ntime_hi = " << c.time_hi << "\nn_freq = " << c.n_freq
        << "\nn_time = " << c.n_time << "\n\n";
    out << "[output]\ndir = " << c.out_dir << "\nthreads = " << c.threads << "\n";
    return out.str();
}

}  // namespace seadvr
