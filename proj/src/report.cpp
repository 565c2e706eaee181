// SPDX-License-Identifier: Apache-2.0
#include "sns/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace sns {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void RunReport::append(RunRow row) {
    if (!rows.empty() && row.t <= rows.back().t)
        throw contract_error("RunReport: rows must be strictly increasing in t");
    rows.push_back(std::move(row));
}

void RunReport::write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw resource_error("cannot open " + path);
    f << "# config_hash=" << config_hash << " seed=" << seed << " version=" << code_version
      << "\n";
    f << "# status=" << terminal_status << " stop_cause=" << int(stop_cause)
      << " stop_time=" << stop_time << " stop_step=" << stop_step << "\n";
    f << "t,w_l2,wl_l2,wl_h1,x_cnorm,y_linf,K,k_saturated,diss,ito_pair,ito_corr,r_pair,"
         "para_pair,large_pair,realized,residual\n";
    f << std::setprecision(17);
    for (const RunRow& r : rows) {
        f << r.t << ',' << r.w_l2 << ',' << r.wl_l2 << ',' << r.wl_h1 << ',' << r.x_cnorm << ','
          << r.y_linf << ',' << r.k_scale << ',' << (r.k_saturated ? 1 : 0);
        if (r.has_ledger)
            f << ',' << r.ledger.dissipation << ',' << r.ledger.ito_pairing << ','
              << r.ledger.ito_correction << ',' << r.ledger.r_pairing << ','
              << r.ledger.para_pairing << ',' << r.ledger.large_pairing << ','
              << r.ledger.realized << ',' << r.ledger.residual();
        else
            f << ",,,,,,,,";
        f << "\n";
    }
}

void write_table_csv(const std::string& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows, const std::string& config_hash,
                     std::uint64_t seed) {
    std::ofstream f(path);
    if (!f) throw resource_error("cannot open " + path);
    f << "# config_hash=" << config_hash << " seed=" << seed << " version=" << kCodeVersion
      << "\n";
    f << header << "\n";
    f << std::setprecision(17);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
        f << "\n";
    }
}

}  // namespace sns
