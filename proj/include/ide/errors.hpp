#ifndef IDE_ERRORS_HPP
#define IDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ide {

/// Bad user-supplied data: malformed documents, invalid networks, flags.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A broken internal invariant. Reaching one of these is a bug, not a
/// property of the instance.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ide

#endif
