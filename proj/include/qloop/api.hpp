#pragma once

#include <cstdint>
#include <string>

#include "qloop/serialization.hpp"

namespace qloop {

/// One bundle of configuration for a whole job; tau is echoed into every
/// output document.
struct JobConfig {
    ModulusConfig modulus;
    ToleranceConfig tolerances;
    std::string mode = "numeric";  ///< "numeric" or "exact"
};

/// classify. Numeric mode takes a loop document and returns the invariant;
/// exact mode takes the symbolic eigenvalue list (constant diagonal loops)
/// and returns the exact (m, phi) and lattice-splitting data.
/// When descent_json is non-null it receives the DescentData document.
std::string api_classify(const std::string& input_json, const JobConfig& job,
                         std::string* descent_json = nullptr);

std::string api_align(const std::string& loop_json, const JobConfig& job);
std::string api_equiv(const std::string& a_json, const std::string& b_json,
                      const JobConfig& job);
std::string api_homdim(const std::string& a_json, const std::string& b_json,
                       const JobConfig& job);
std::string api_synth(const std::string& invariant_json, const JobConfig& job);
std::string api_tensor(const std::string& a_json, const std::string& b_json,
                       const JobConfig& job);
std::string api_dual(const std::string& invariant_json, const JobConfig& job);
std::string api_sum(const std::string& a_json, const std::string& b_json,
                    const JobConfig& job);
/// JSON-lines report; *failures receives the number of failed trials.
std::string api_selftest(uint64_t seed, int trials, const JobConfig& job,
                         int* failures);

}  // namespace qloop
