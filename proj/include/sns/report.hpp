// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_REPORT_HPP
#define SNS_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sns/diagnostics.hpp"

namespace sns {

inline constexpr const char* kCodeVersion = "sns 0.1.0";

// FNV-1a, stable across runs; used to stamp outputs with their config
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

struct RunRow {
    double t = 0;
    double w_l2 = 0;
    double wl_l2 = 0;
    double wl_h1 = 0;     // ||grad wL||
    double x_cnorm = 0;   // ||X||_{C^-kappa}
    double y_linf = 0;
    double k_scale = 0;   // current K
    bool k_saturated = false;
    LedgerRow ledger;
    bool has_ledger = false;
};

struct RunReport {
    std::vector<RunRow> rows;
    std::string terminal_status = "ok";  // ok | stopped | blowup
    StopCause stop_cause = StopCause::none;
    double stop_time = -1;
    std::uint64_t stop_step = 0;
    // provenance
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string code_version = kCodeVersion;

    void append(RunRow row);  // enforces strictly increasing t
    void write_csv(const std::string& path) const;
};

// generic CSV with provenance comment lines
void write_table_csv(const std::string& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows, const std::string& config_hash,
                     std::uint64_t seed);

}  // namespace sns

#endif
