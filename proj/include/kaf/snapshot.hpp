#pragma once

// Model snapshots as JSON.
//
//   krls-ald-reg: {"algorithm", "kernel", "lambda", "delta", "unregularized",
//                  "centers", "centers_checksum", "alpha", "n", "resume_exact",
//                  ["P", "M"], "store_gram", ["gram", "gram_inv"]}
//   klms:         {"algorithm", "kernel", "eta", "centers", "coeffs"}
//   lms / rls:    {"algorithm", "weights", "eta" | "lambda", ["P"], "n"}
//
// Doubles are written in shortest round-trip form, so a snapshot with
// resume_exact reloads into a filter that continues bit-identically.
// Without P and M a KRLS snapshot reloads as predict-only.

#include <string>

#include "json.hpp"
#include "kaf/klms.hpp"
#include "kaf/krls.hpp"
#include "kaf/linear.hpp"

namespace kaf {

struct KrlsSnapshotOptions {
    bool resume_exact = false;  // embed P and M
    bool store_gram = false;    // embed gram and its inverse instead of recomputing on load
};

nlohmann::json to_snapshot(const RegKrls& filter, KrlsSnapshotOptions options = {});
nlohmann::json to_snapshot(const Klms& filter);
nlohmann::json to_snapshot(const LinearFilter& filter);

RegKrls krls_from_snapshot(const nlohmann::json& j);
Klms klms_from_snapshot(const nlohmann::json& j);
LinearFilter linear_from_snapshot(const nlohmann::json& j);

// The "algorithm" field, validated.
std::string snapshot_algorithm(const nlohmann::json& j);

}  // namespace kaf
