#pragma once

#include <cstddef>

namespace kaf {

// What one online iteration reports. y is the a-priori prediction, made
// with the coefficients held before this sample was absorbed.
struct StepOutput {
    double y = 0.0;
    double e = 0.0;  // d - y
    bool grew = false;
    std::size_t dict_size = 0;
    double step_seconds = 0.0;  // filled by the harness when timing is on
};

}  // namespace kaf
