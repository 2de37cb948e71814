#pragma once

#include "sphreg/harmonics.hpp"
#include "sphreg/operators.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

namespace testutil {

using Rng = boost::random::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
    return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
}

inline sphreg::UnitVector random_unit(Rng& rng) {
    while (true) {
        const double x = uniform(rng), y = uniform(rng), z = uniform(rng);
        const double n2 = x * x + y * y + z * z;
        if (n2 > 1e-4 && n2 <= 1.0) return sphreg::UnitVector::normalized(x, y, z);
    }
}

inline sphreg::HarmonicCoefficients random_coeffs(int M, double radius, Rng& rng) {
    sphreg::HarmonicCoefficients c(M, radius);
    for (auto& v : c.values()) v = uniform(rng);
    return c;
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(rng);
    return v;
}

/// Fresh empty directory under the system temp dir, unique per running test
/// so that tests executed in parallel never share one.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    std::string name = "sphreg-test-" + tag;
    if (const auto* info = ::testing::UnitTest::GetInstance()->current_test_info()) {
        name += std::string("-") + info->test_suite_name() + "-" + info->name();
    }
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
