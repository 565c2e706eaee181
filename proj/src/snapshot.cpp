// SPDX-License-Identifier: Apache-2.0
#include "sns/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "sns/solver.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping not implemented");

namespace sns {

namespace {

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw resource_error("snapshot: truncated stream");
    return v;
}

void put_cplx_array(std::ostream& os, const std::vector<cplx>& a) {
    os.write(reinterpret_cast<const char*>(a.data()), std::streamsize(a.size() * sizeof(cplx)));
}

void get_cplx_array(std::istream& is, std::vector<cplx>& a) {
    is.read(reinterpret_cast<char*>(a.data()), std::streamsize(a.size() * sizeof(cplx)));
    if (!is) throw resource_error("snapshot: truncated stream");
}

}  // namespace

void write_field(std::ostream& os, const SpectralField& f) {
    os.write("SNS2", 4);
    put<std::uint16_t>(os, 1);
    put<std::uint32_t>(os, std::uint32_t(f.grid().n()));
    std::uint8_t flags = (f.mean_free ? 1 : 0) | (f.div_free ? 2 : 0);
    put<std::uint8_t>(os, flags);
    put_cplx_array(os, f.comp(0));
    put_cplx_array(os, f.comp(1));
}

SpectralField read_field(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SNS2", 4) != 0)
        throw resource_error("snapshot: bad magic");
    std::uint16_t version = get<std::uint16_t>(is);
    if (version != 1) throw resource_error("snapshot: unsupported version");
    std::uint32_t n = get<std::uint32_t>(is);
    std::uint8_t flags = get<std::uint8_t>(is);
    SpectralField f{TorusGrid(int(n))};
    get_cplx_array(is, f.comp(0));
    get_cplx_array(is, f.comp(1));
    f.mean_free = flags & 1;
    f.div_free = flags & 2;
    return f;
}

void write_field_file(const std::string& path, const SpectralField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw resource_error("cannot open " + path);
    write_field(os, f);
}

SpectralField read_field_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw resource_error("cannot open " + path);
    return read_field(is);
}

void write_checkpoint(const std::string& path, const AnsatzStepper& stepper,
                      const std::string& config_hash) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw resource_error("cannot open " + path);
    os.write("SNSC", 4);
    put<std::uint16_t>(os, 1);
    put<double>(os, stepper.t());
    put<double>(os, stepper.lambda());
    put<double>(os, stepper.K());
    put<std::uint64_t>(os, stepper.step_count());
    put<std::uint64_t>(os, stepper.conv().rng().seed());
    put<std::uint64_t>(os, stepper.conv().rng().stream());
    put<std::uint64_t>(os, fnv1a(config_hash));
    put<std::uint32_t>(os, std::uint32_t(stepper.grid().n()));
    put_cplx_array(os, stepper.conv().amplitudes());
    const auto& ur0 = stepper.conv().rough_init();
    write_field(os, ur0 ? *ur0 : SpectralField(stepper.grid()));
    write_field(os, stepper.Y());
    write_field(os, stepper.wH());
    write_field(os, stepper.wL());
}

CheckpointHeader resume_checkpoint(const std::string& path, AnsatzStepper& stepper) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw resource_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SNSC", 4) != 0)
        throw resource_error("checkpoint: bad magic");
    std::uint16_t version = get<std::uint16_t>(is);
    if (version != 1) throw resource_error("checkpoint: unsupported version");
    CheckpointHeader hd{};
    hd.t = get<double>(is);
    hd.lambda = get<double>(is);
    hd.K = get<double>(is);
    hd.step = get<std::uint64_t>(is);
    hd.seed = get<std::uint64_t>(is);
    hd.stream = get<std::uint64_t>(is);
    hd.config_hash = get<std::uint64_t>(is);
    std::uint32_t n = get<std::uint32_t>(is);
    if (int(n) != stepper.grid().n()) throw contract_error("checkpoint: grid mismatch");
    if (hd.seed != stepper.conv().rng().seed() || hd.stream != stepper.conv().rng().stream())
        throw contract_error("checkpoint: rng stream mismatch");
    std::vector<cplx> z(stepper.grid().size());
    get_cplx_array(is, z);
    SpectralField ur = read_field(is);
    SpectralField Y = read_field(is);
    SpectralField wH = read_field(is);
    SpectralField wL = read_field(is);
    stepper.restore(hd.t, hd.step, hd.lambda, std::move(z), std::move(ur), std::move(Y),
                    std::move(wH), std::move(wL));
    return hd;
}

}  // namespace sns
