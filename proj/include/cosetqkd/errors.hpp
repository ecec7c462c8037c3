#pragma once

#include <stdexcept>
#include <string>

namespace cosetqkd {

// Error taxonomy mirrored by the CLI exit codes:
//   validation_error   -> 2  (malformed input, unsupported structure, bad dimensions)
//   precondition_error -> 3  (formula/protocol precondition does not hold for the given numbers)
//   resource_error     -> 4  (caps exceeded, unwritable outputs, rejection sampling starved)
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string &msg) : std::runtime_error(msg) {}
};

struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string &msg) : std::runtime_error(msg) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string &msg) : std::runtime_error(msg) {}
};

inline void require_valid(bool ok, const std::string &msg) {
    if (!ok) {
        throw validation_error(msg);
    }
}

inline void require_precondition(bool ok, const std::string &msg) {
    if (!ok) {
        throw precondition_error(msg);
    }
}

}  // namespace cosetqkd
