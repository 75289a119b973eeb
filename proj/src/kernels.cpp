#include "kaf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaf/errors.hpp"
#include "kaf/simd/kernels.hpp"

namespace kaf {

namespace {

double ipow(double base, int exponent) {
    double result = base;
    for (int i = 1; i < exponent; ++i) result *= base;
    return result;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

}  // namespace

KernelSpec KernelSpec::gaussian(double sigma) {
    KernelSpec spec{KernelFamily::gaussian, sigma, 1};
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::polynomial(int degree) {
    KernelSpec spec{KernelFamily::polynomial, 1.0, degree};
    spec.validate();
    return spec;
}

void KernelSpec::validate() const {
    if (family == KernelFamily::gaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
        throw ValidationError("gaussian kernel requires sigma > 0", "sigma");
    }
    if (family == KernelFamily::polynomial && degree < 1) {
        throw ValidationError("polynomial kernel requires degree >= 1", "degree");
    }
}

void to_json(nlohmann::json& j, const KernelSpec& spec) {
    j = nlohmann::json{{"family", spec.family == KernelFamily::gaussian ? "gaussian" : "polynomial"},
                       {"sigma", spec.sigma},
                       {"degree", spec.degree}};
}

void from_json(const nlohmann::json& j, KernelSpec& spec) {
    if (!j.is_object()) throw ValidationError("kernel must be an object", "kernel");
    KernelSpec out;
    const std::string family = j.value("family", std::string("gaussian"));
    if (family == "gaussian") {
        out.family = KernelFamily::gaussian;
    } else if (family == "polynomial") {
        out.family = KernelFamily::polynomial;
    } else {
        throw ValidationError("unknown kernel family '" + family + "'", "kernel.family");
    }
    out.sigma = j.value("sigma", 1.0);
    out.degree = j.value("degree", 1);
    out.validate();
    spec = out;
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericalError(std::string(what) + " contains a non-finite value");
    }
}

double eval_unchecked(const KernelSpec& spec, std::span<const double> u, std::span<const double> v) {
    // Accumulation order matches kernel_vector so both give identical bits.
    double acc = 0.0;
    if (spec.family == KernelFamily::gaussian) {
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double diff = v[j] - u[j];
            acc += diff * diff;
        }
        return std::exp(-acc / (spec.sigma * spec.sigma));
    }
    for (std::size_t j = 0; j < u.size(); ++j) acc += u[j] * v[j];
    return ipow(acc + 1.0, spec.degree);
}

double eval(const KernelSpec& spec, std::span<const double> u, std::span<const double> v) {
    require_same_dim(u.size(), v.size(), "kernel eval");
    require_finite(u, "kernel input");
    require_finite(v, "kernel input");
    return eval_unchecked(spec, u, v);
}

DenseMatrix gram(const KernelSpec& spec, const std::vector<Vector>& points) {
    if (points.empty()) throw ValidationError("gram requires at least one point");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        require_same_dim(p.size(), dim, "gram");
        require_finite(p, "gram point");
    }
    DenseMatrix k(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double value = eval_unchecked(spec, points[i], points[j]);
            k(i, j) = value;
            k(j, i) = value;
        }
    }
    return k;
}

double expansion_inner_product(const KernelSpec& spec, const Expansion& h, const Expansion& g) {
    if (h.coeffs.size() != h.centers.size() || g.coeffs.size() != g.centers.size()) {
        throw DimensionError("expansion: coefficient and center counts differ");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < h.centers.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.centers.size(); ++j) {
            row += g.coeffs[j] * eval(spec, h.centers[i], g.centers[j]);
        }
        total += h.coeffs[i] * row;
    }
    return total;
}

void CenterSet::push_back(std::span<const double> u) {
    require_same_dim(u.size(), dim(), "center set");
    const std::size_t n = size();
    for (auto& c : columns_) {
        if (c.capacity() == n) c.reserve(2 * n + 8);
    }
    for (std::size_t j = 0; j < u.size(); ++j) columns_[j].push_back(u[j]);
}

Vector CenterSet::at(std::size_t i) const {
    Vector u(dim());
    for (std::size_t j = 0; j < dim(); ++j) u[j] = columns_[j][i];
    return u;
}

std::vector<Vector> CenterSet::to_rows() const {
    std::vector<Vector> rows;
    rows.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) rows.push_back(at(i));
    return rows;
}

void kernel_vector(const KernelSpec& spec, const CenterSet& centers, std::span<const double> u,
                   std::span<double> out) {
    const std::size_t n = centers.size();
    const auto& t = simd::active();
    std::fill(out.begin(), out.end(), 0.0);
    if (spec.family == KernelFamily::gaussian) {
        for (std::size_t j = 0; j < centers.dim(); ++j) t.sub_sq_accumulate(centers.column(j), u[j], out.data(), n);
        const double s2 = spec.sigma * spec.sigma;
        for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-out[i] / s2);
        return;
    }
    for (std::size_t j = 0; j < centers.dim(); ++j) t.axpy(u[j], centers.column(j), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = ipow(out[i] + 1.0, spec.degree);
}

}  // namespace kaf
