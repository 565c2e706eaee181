// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_COMMON_HPP
#define SNS_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sns {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Hard cap on physical-space collocation points per plane (oversample*n)^2.
inline constexpr std::size_t kMaxPhysicalPoints = std::size_t{1} << 24;

// A caller broke a documented precondition (grid mismatch, wrong flags, ...).
class contract_error : public std::logic_error {
  public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// A requested operation exceeds the configured resource budget.
class resource_error : public std::runtime_error {
  public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// NaN/Inf detected while time stepping; carries where and when.
class blowup_error : public std::runtime_error {
  public:
    blowup_error(const std::string& what, double t, std::uint64_t step)
        : std::runtime_error(what + " at t=" + std::to_string(t) + " step=" + std::to_string(step)),
          t_blowup(t), step_blowup(step) {}
    double t_blowup;
    std::uint64_t step_blowup;
};

}  // namespace sns

#endif
