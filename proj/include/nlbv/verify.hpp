#ifndef NLBV_VERIFY_HPP
#define NLBV_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace nlbv {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> verify_energy(std::uint64_t seed);
std::vector<CheckResult> verify_geom(std::uint64_t seed);
std::vector<CheckResult> verify_cheeger(std::uint64_t seed);
std::vector<CheckResult> verify_fidelity(std::uint64_t seed);
std::vector<CheckResult> verify_rearrange(std::uint64_t seed);

/// Runs one suite by name, or every suite for "all".
std::vector<CheckResult> run_verify_suite(const std::string& name, std::uint64_t seed);

} // namespace nlbv

#endif
