#pragma once

#include <stdexcept>
#include <string>

namespace atrm {

// Base for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/layer shape disagreements. Message names the offending dimension.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid argument values (bad config fields, out-of-range scalars).
class ValueError : public Error {
public:
    explicit ValueError(const std::string& msg) : Error(msg) {}
};

// Non-finite values where the numeric contract forbids them.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// File and format failures, with a machine-checkable kind.
class IoError : public Error {
public:
    enum class Kind {
        open_failed,
        bad_magic,
        bad_header,
        bad_version,
        truncated,
        write_failed,
    };

    IoError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace atrm
