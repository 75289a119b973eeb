#pragma once

// Data-parallel inner loops shared by every filter.
//
// Each primitive has a scalar reference implementation and, on x86-64, an
// AVX2 variant. The variant is picked once at first use from the CPU's
// capabilities and can be overridden with KAF_SIMD=scalar|avx2|auto.
//
// Element-wise primitives (axpy, sub_sq_accumulate) produce bit-identical
// results across backends. The dot reduction reassociates the sum and agrees
// to within a few ulps.

#include <cstddef>
#include <string_view>

namespace kaf::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
    Backend backend;
    const char* name;
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[i] += (col[i] - s)^2
    void (*sub_sq_accumulate)(const double* col, double s, double* out, std::size_t n);
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sub_sq_accumulate(const double* col, double s, double* out, std::size_t n);
}  // namespace scalar

const KernelTable& scalar_table();

// nullptr when the build or the host CPU lacks AVX2.
const KernelTable* avx2_table();

// The table every filter uses.
const KernelTable& active();

// Overrides the runtime choice. Throws std::invalid_argument when the
// requested backend is unavailable on this host.
void select(Backend backend);

// Parses "scalar", "avx2" or "auto" (host best).
Backend parse_backend(std::string_view name);

}  // namespace kaf::simd
