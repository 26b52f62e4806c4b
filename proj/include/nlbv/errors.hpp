#ifndef NLBV_ERRORS_HPP
#define NLBV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlbv {

/// Base class for all domain errors raised by the toolkit.
/// The CLI maps these to exit code 1; usage errors exit with 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& msg) : Error("invalid parameter: " + msg) {}
};

// Kernel decays at exponent >= n+1: only a.e.-constant functions have
// finite energy, so no finite-energy problem can be posed.
class DegenerateKernel : public Error {
public:
    explicit DegenerateKernel(const std::string& msg) : Error("degenerate kernel: " + msg) {}
};

class ZeroOffset : public Error {
public:
    ZeroOffset() : Error("kernel evaluated at zero offset") {}
};

class BadRange : public Error {
public:
    explicit BadRange(const std::string& msg) : Error("bad range: " + msg) {}
};

class WindowTooSmall : public Error {
public:
    explicit WindowTooSmall(const std::string& msg) : Error("window too small: " + msg) {}
};

class GridMismatch : public Error {
public:
    explicit GridMismatch(const std::string& msg) : Error("grid mismatch: " + msg) {}
};

class MalformedHeader : public Error {
public:
    explicit MalformedHeader(const std::string& msg) : Error("malformed header: " + msg) {}
};

class UnsupportedFormat : public Error {
public:
    explicit UnsupportedFormat(const std::string& msg) : Error("unsupported format: " + msg) {}
};

class CapacityOverflow : public Error {
public:
    explicit CapacityOverflow(const std::string& msg)
        : Error("fixed-point capacity overflow (lower the scale): " + msg) {}
};

class NonIntegrableKernel : public Error {
public:
    explicit NonIntegrableKernel(const std::string& msg) : Error("kernel not integrable: " + msg) {}
};

class NonIntegrableTail : public Error {
public:
    explicit NonIntegrableTail(const std::string& msg) : Error("kernel tail not integrable: " + msg) {}
};

class NotAdmissible : public Error {
public:
    explicit NotAdmissible(const std::string& msg) : Error("domain not admissible: " + msg) {}
};

class NestingViolation : public Error {
public:
    explicit NestingViolation(const std::string& msg) : Error("level nesting violated: " + msg) {}
};

class ConstantInput : public Error {
public:
    ConstantInput() : Error("constant input") {}
};

} // namespace nlbv

#endif
