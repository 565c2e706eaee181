// SPDX-License-Identifier: Apache-2.0
#include "sns/config.hpp"

#include <fstream>
#include <sstream>

#include "sns/report.hpp"

namespace sns {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse_string(const std::string& text) {
    Config c;
    c.text_ = text;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw contract_error("config line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw contract_error("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw contract_error("config line " + std::to_string(lineno) + ": empty key");
        std::string full = section.empty() ? key : section + "." + key;
        c.kv_[full] = val;
        c.used_[full] = false;
    }
    return c;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw resource_error("cannot open config " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_string(os.str());
}

std::string Config::get_str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    used_[key] = true;
    return it->second;
}

double Config::get_num(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    used_[key] = true;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw contract_error("config key " + key + ": not a number: " + it->second);
    }
}

int Config::get_int(const std::string& key, int dflt) const {
    double v = get_num(key, double(dflt));
    int i = int(v);
    if (double(i) != v) throw contract_error("config key " + key + ": not an integer");
    return i;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    std::string s = get_str(key, dflt ? "true" : "false");
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw contract_error("config key " + key + ": not a boolean: " + s);
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    used_[key] = true;
    std::vector<double> out;
    std::istringstream is(it->second);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (!used_.at(k)) out.push_back(k);
    return out;
}

std::string Config::hash() const { return hash_hex(fnv1a(text_)); }

ExperimentSetup ExperimentSetup::from_config(const Config& c) {
    ExperimentSetup s;
    s.n = c.get_int("grid.n", s.n);
    if (s.n < 4 || s.n % 2 != 0)
        throw contract_error("grid.n must be even and >= 4, got " + std::to_string(s.n));
    s.kappa = c.get_num("grid.kappa", s.kappa);
    s.alpha0 = c.get_num("noise.alpha0", s.alpha0);
    s.split_radius = c.get_int("noise.split_radius", s.split_radius);
    s.phi_kind = c.get_str("noise.phi", s.phi_kind);
    {
        std::vector<double> prof = c.get_list("noise.profile", {});
        for (std::size_t i = 0; i + 1 < prof.size(); i += 2)
            s.phi_profile.push_back(prof[i]), s.phi_profile.push_back(prof[i + 1]);
    }
    s.h = c.get_num("run.h", s.h);
    s.t_end = c.get_num("run.t_end", s.t_end);
    s.ensemble = c.get_int("run.ensemble", s.ensemble);
    s.seed = std::uint64_t(c.get_num("run.seed", double(s.seed)));
    s.threads = c.get_int("run.threads", s.threads);
    s.out_dir = c.get_str("output.dir", s.out_dir);
    s.lambda = c.get_num("init.lambda", s.lambda);
    s.rough_amp = c.get_num("init.rough_amp", s.rough_amp);
    s.dealias = c.get_str("run.dealias", s.dealias);
    return s;
}

NoiseSpectrum ExperimentSetup::make_spectrum(const TorusGrid& g) const {
    if (phi_kind == "constant") return NoiseSpectrum::constant(g, alpha0, split_radius);
    if (phi_kind == "band") {
        std::vector<std::pair<double, double>> prof;
        for (std::size_t i = 0; i + 1 < phi_profile.size(); i += 2)
            prof.emplace_back(phi_profile[i], phi_profile[i + 1]);
        return NoiseSpectrum::band(g, alpha0, split_radius, prof);
    }
    if (phi_kind == "table") return NoiseSpectrum::table(g, alpha0, split_radius, phi_table);
    throw contract_error("noise.phi must be constant, band, or table");
}

Dealias ExperimentSetup::dealias_rule() const {
    if (dealias == "two_thirds") return Dealias::two_thirds;
    if (dealias == "none") return Dealias::none;
    throw contract_error("run.dealias must be two_thirds or none");
}

}  // namespace sns
