// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_SNAPSHOT_HPP
#define SNS_SNAPSHOT_HPP

#include <iosfwd>
#include <string>

#include "sns/field.hpp"

namespace sns {

class AnsatzStepper;

// Binary field snapshot: magic "SNS2", version u16, n u32, flags u8
// (bit0 mean_free, bit1 div_free), then n^2 complex pairs per component as
// little-endian f64, row-major over k1 then k2.
void write_field(std::ostream& os, const SpectralField& f);
SpectralField read_field(std::istream& is);

void write_field_file(const std::string& path, const SpectralField& f);
SpectralField read_field_file(const std::string& path);

// Checkpoint: header record (t, lambda, K, rng counters, config hash) followed
// by the OU amplitudes and the component fields; resumable bit-exactly.
void write_checkpoint(const std::string& path, const AnsatzStepper& stepper,
                      const std::string& config_hash);

struct CheckpointHeader {
    double t;
    double lambda;
    double K;
    std::uint64_t step;
    std::uint64_t seed;
    std::uint64_t stream;
    std::uint64_t config_hash;
};

// Reads the checkpoint into an already-constructed stepper (same grid/noise
// config); throws contract_error on mismatch, resource_error on bad files.
CheckpointHeader resume_checkpoint(const std::string& path, AnsatzStepper& stepper);

}  // namespace sns

#endif
