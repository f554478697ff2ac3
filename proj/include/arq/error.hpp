#pragma once

#include <stdexcept>
#include <string>

namespace arq {

/* Exit-code taxonomy: 1 = bad input, 2 = violated precondition, 3 = internal bug. */
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& m) : std::runtime_error(m) {}
};

struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& m) : std::runtime_error(m) {}
};

struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& m) : std::runtime_error(m) {}
};

/* Internal consistency check; failing one is always a bug, never a user error. */
#define ARQ_CHECK(cond, msg)                                                     \
    do {                                                                         \
        if (!(cond)) throw ::arq::invariant_error(std::string("invariant: ") + (msg)); \
    } while (0)

#define ARQ_REQUIRE(cond, msg)                                                   \
    do {                                                                         \
        if (!(cond)) throw ::arq::precondition_error(msg);                       \
    } while (0)

} // namespace arq
