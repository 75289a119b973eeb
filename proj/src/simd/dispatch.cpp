#include "kaf/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#if defined(KAF_HAVE_AVX2)
namespace kaf::simd::avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sub_sq_accumulate(const double* col, double s, double* out, std::size_t n);
}  // namespace kaf::simd::avx2
#endif

namespace kaf::simd {

namespace {

constexpr KernelTable kScalar{Backend::scalar, "scalar", scalar::dot, scalar::axpy, scalar::sub_sq_accumulate};

#if defined(KAF_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::avx2, "avx2", avx2::dot, avx2::axpy, avx2::sub_sq_accumulate};

bool host_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable* best_available() {
    if (const KernelTable* t = avx2_table()) return t;
    return &kScalar;
}

const KernelTable* initial_choice() {
    const char* env = std::getenv("KAF_SIMD");
    if (env == nullptr || *env == '\0') return best_available();
    try {
        switch (parse_backend(env)) {
            case Backend::avx2:
                if (const KernelTable* t = avx2_table()) return t;
                return &kScalar;
            case Backend::scalar:
                return &kScalar;
        }
    } catch (const std::invalid_argument&) {
    }
    return best_available();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_choice()};
    return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(KAF_HAVE_AVX2)
    static const bool supported = host_has_avx2();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Backend backend) {
    if (backend == Backend::scalar) {
        current().store(&kScalar, std::memory_order_release);
        return;
    }
    const KernelTable* t = avx2_table();
    if (t == nullptr) throw std::invalid_argument("avx2 backend not available on this host");
    current().store(t, std::memory_order_release);
}

Backend parse_backend(std::string_view name) {
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    if (name == "auto") return best_available()->backend;
    throw std::invalid_argument("unknown SIMD backend '" + std::string(name) + "'");
}

}  // namespace kaf::simd
