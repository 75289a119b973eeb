#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace kaf {

// Oracle-equivalence suites. Each drives the real filters on a seeded
// stream and compares against an independent dense computation.
//
//   krls-batch           recursive KRLS coefficients vs the dense batch solve
//                        after every step (relative 2-norm, 1e-8); admission
//                        decisions must agree
//   klms-feature         KLMS (polynomial, degree 2, 2-D input) vs LMS on the
//                        explicit 6-D monomial features (absolute, 1e-10)
//   gram-psd             smallest Gram eigenvalue of random Gaussian point
//                        sets (>= -1e-10 n)
//   inverse-consistency  ||Kd Kd^-1 - I||_inf after every dictionary growth
//                        of a KRLS run (1e-8)
enum class VerifySuite { krls_batch, klms_feature, gram_psd, inverse_consistency };

VerifySuite parse_verify_suite(const std::string& name);
const char* to_string(VerifySuite suite);

struct VerifyOptions {
    std::optional<std::size_t> samples;  // suite default when unset
    std::uint64_t seed = 2024;
};

struct VerifyReport {
    std::string suite;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::optional<std::size_t> first_failing_step;
    nlohmann::json details = nlohmann::json::object();
};

VerifyReport run_verify(VerifySuite suite, VerifyOptions options = {});

nlohmann::json to_json(const VerifyReport& r);

}  // namespace kaf
