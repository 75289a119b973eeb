#include "kaf/snapshot.hpp"

#include <cstdio>

#include "kaf/errors.hpp"

namespace kaf {

using nlohmann::json;

namespace {

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("snapshot: missing field '") + key + "'", key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("snapshot: field '") + key + "' has the wrong type", key);
    }
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

DenseMatrix matrix_field(const json& j, const char* key) {
    return DenseMatrix::from_rows(require<std::vector<Vector>>(j, key));
}

}  // namespace

std::string snapshot_algorithm(const json& j) {
    if (!j.is_object()) throw ValidationError("snapshot must be a JSON object");
    const auto algorithm = require<std::string>(j, "algorithm");
    if (algorithm != "krls-ald-reg" && algorithm != "klms" && algorithm != "lms" && algorithm != "rls") {
        throw ValidationError("snapshot: unknown algorithm '" + algorithm + "'", "algorithm");
    }
    return algorithm;
}

json to_snapshot(const RegKrls& filter, KrlsSnapshotOptions options) {
    const auto& dict = filter.dictionary();
    json j{{"algorithm", "krls-ald-reg"},
           {"kernel", dict.spec()},
           {"lambda", filter.params().lambda},
           {"delta", filter.params().delta},
           {"unregularized", filter.params().unregularized},
           {"centers", dict.centers().to_rows()},
           {"centers_checksum", hex64(dict.centers_checksum())},
           {"alpha", filter.alpha()},
           {"n", filter.n()},
           {"resume_exact", options.resume_exact && filter.resumable()},
           {"store_gram", options.store_gram}};
    if (options.resume_exact && filter.resumable()) {
        j["P"] = filter.p().to_rows();
        j["M"] = filter.m().to_rows();
    }
    if (options.store_gram) {
        j["gram"] = dict.gram().to_rows();
        j["gram_inv"] = dict.gram_inv().to_rows();
    }
    return j;
}

RegKrls krls_from_snapshot(const json& j) {
    if (snapshot_algorithm(j) != "krls-ald-reg") throw ValidationError("snapshot is not krls-ald-reg", "algorithm");
    KrlsParams params;
    params.kernel = require<KernelSpec>(j, "kernel");
    params.lambda = require<double>(j, "lambda");
    params.delta = require<double>(j, "delta");
    params.unregularized = j.value("unregularized", false);
    const auto centers = require<std::vector<Vector>>(j, "centers");
    if (centers.empty()) throw ValidationError("snapshot: no centers", "centers");
    for (const auto& c : centers) {
        if (c.size() != centers.front().size()) throw DimensionError("snapshot: centers differ in dimension");
    }
    if (j.contains("centers_checksum") && require<std::string>(j, "centers_checksum") != hex64(checksum_rows(centers))) {
        throw ValidationError("snapshot: centers do not match their checksum", "centers_checksum");
    }
    Dictionary dict = j.value("store_gram", false)
                          ? Dictionary::from_parts(params.kernel, centers, matrix_field(j, "gram"),
                                                   matrix_field(j, "gram_inv"))
                          : Dictionary::from_centers(params.kernel, centers);
    std::optional<DenseMatrix> p, m;
    if (j.value("resume_exact", false)) {
        p = matrix_field(j, "P");
        m = matrix_field(j, "M");
    }
    return RegKrls::restore(params, std::move(dict), require<Vector>(j, "alpha"), std::move(p), std::move(m),
                            require<std::size_t>(j, "n"));
}

json to_snapshot(const Klms& filter) {
    return json{{"algorithm", "klms"},
                {"kernel", filter.params().kernel},
                {"eta", filter.params().eta},
                {"centers", filter.centers().to_rows()},
                {"coeffs", filter.coeffs()}};
}

Klms klms_from_snapshot(const json& j) {
    if (snapshot_algorithm(j) != "klms") throw ValidationError("snapshot is not klms", "algorithm");
    KlmsParams params;
    params.kernel = require<KernelSpec>(j, "kernel");
    params.eta = require<double>(j, "eta");
    return Klms::restore(params, require<std::vector<Vector>>(j, "centers"), require<Vector>(j, "coeffs"));
}

json to_snapshot(const LinearFilter& filter) {
    const bool rls = filter.params().algorithm == LinearAlgorithm::rls;
    json j{{"algorithm", rls ? "rls" : "lms"}, {"weights", filter.weights()}, {"n", filter.n()}};
    if (rls) {
        j["lambda"] = filter.params().lambda;
        j["P"] = filter.p().to_rows();
    } else {
        j["eta"] = filter.params().eta;
    }
    return j;
}

LinearFilter linear_from_snapshot(const json& j) {
    const auto algorithm = snapshot_algorithm(j);
    LinearParams params;
    std::optional<DenseMatrix> p;
    if (algorithm == "lms") {
        params.algorithm = LinearAlgorithm::lms;
        params.eta = require<double>(j, "eta");
    } else if (algorithm == "rls") {
        params.algorithm = LinearAlgorithm::rls;
        params.lambda = require<double>(j, "lambda");
        p = matrix_field(j, "P");
    } else {
        throw ValidationError("snapshot is not a linear filter", "algorithm");
    }
    return LinearFilter::restore(params, require<Vector>(j, "weights"), std::move(p));
}

}  // namespace kaf
