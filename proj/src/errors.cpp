#include "kaf/errors.hpp"

namespace kaf {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::dimension: return "dimension";
        case ErrorKind::numerical: return "numerical";
        case ErrorKind::capacity: return "capacity";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation:
        case ErrorKind::dimension: return 1;
        case ErrorKind::numerical:
        case ErrorKind::capacity: return 2;
        case ErrorKind::io: return 3;
    }
    return 2;
}

}  // namespace kaf
