#ifndef STEINER_ERRORS_HPP
#define STEINER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace steiner {

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a general-position assumption (collinear, cocircular,
/// coincident points, or colliding arrangement vertices).
class degeneracy_error : public error
{
public:
    using error::error;
};

/// A documented precondition of an operation was not met by the caller.
class precondition_error : public error
{
public:
    using error::error;
};

/// A file could not be read, or its contents are not in the expected format.
class io_error : public error
{
public:
    using error::error;
};

/// An internal structure came out malformed; signals a violated invariant.
class structural_error : public error
{
public:
    using error::error;
};

} // namespace steiner

#endif // STEINER_ERRORS_HPP
