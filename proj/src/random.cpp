#include "kaf/random.hpp"

#include <cmath>

namespace kaf {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double x, y, s;
    do {
        x = uniform(-1.0, 1.0);
        y = uniform(-1.0, 1.0);
        s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = y * scale;
    has_spare_ = true;
    return x * scale;
}

}  // namespace kaf
