// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_CONFIG_HPP
#define SNS_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "sns/noise.hpp"

namespace sns {

// Flat sectioned key=value text; '#' starts a comment.  Keys are addressed as
// "section.key".  Unknown keys in a parse are reported so configs stay honest.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get_str(const std::string& key, const std::string& dflt) const;
    double get_num(const std::string& key, double dflt) const;
    int get_int(const std::string& key, int dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    std::vector<double> get_list(const std::string& key, std::vector<double> dflt) const;

    // keys never read back; used to reject typos
    std::vector<std::string> unused_keys() const;

    const std::string& text() const { return text_; }
    std::string hash() const;

  private:
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, bool> used_;
    std::string text_;
};

// Common experiment parameters assembled from a config (grid, noise, run).
struct ExperimentSetup {
    int n = 32;
    double kappa = 0.01;
    double alpha0 = 0.2;
    int split_radius = 2;
    std::string phi_kind = "constant";  // constant | band | table
    std::vector<double> phi_profile;    // (r, amp) pairs for band
    std::vector<std::tuple<int, int, cplx>> phi_table;
    double h = 0.0;  // 0 = default from the grid
    double t_end = 1.0;
    int ensemble = 8;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    double lambda = 1.0;
    double rough_amp = 0.0;
    std::string dealias = "two_thirds";

    static ExperimentSetup from_config(const Config& c);
    NoiseSpectrum make_spectrum(const TorusGrid& g) const;
    Dealias dealias_rule() const;
};

}  // namespace sns

#endif
