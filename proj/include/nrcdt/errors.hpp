#pragma once

#include <stdexcept>
#include <string>

namespace nrcdt {

// Base class for all library errors; every throw site uses a named subclass
// so callers can catch by failure kind.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class AllZeroImage : public Error {
public:
    AllZeroImage() : Error("image has zero total intensity") {}
};

class NegativePixel : public Error {
public:
    explicit NegativePixel(const std::string& where)
        : Error("negative pixel value: " + where) {}
};

class ArgOutOfRange : public Error {
public:
    explicit ArgOutOfRange(const std::string& what) : Error("argument out of range: " + what) {}
};

class NonUnitDirection : public Error {
public:
    NonUnitDirection() : Error("direction vector is not unit length") {}
};

class SupportOutsideDisc : public Error {
public:
    explicit SupportOutsideDisc(double r)
        : Error("projected support outside radial grid, |t| = " + std::to_string(r)) {}
};

class QueryOutsideGrid : public Error {
public:
    explicit QueryOutsideGrid(double t)
        : Error("query point outside radial grid: " + std::to_string(t)) {}
};

class SingularMatrix : public Error {
public:
    SingularMatrix() : Error("matrix is singular") {}
};

class GridMismatch : public Error {
public:
    GridMismatch() : Error("operand grids do not match") {}
};

// Raised when a per-angle slice has (numerically) zero spread, i.e. the
// measure is concentrated on a line orthogonal to that direction.
class DegenerateDirection : public Error {
public:
    explicit DegenerateDirection(std::size_t angle_index)
        : Error("degenerate direction at angle index " + std::to_string(angle_index)),
          angle(angle_index) {}
    std::size_t angle;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded() : Error("perturbation budget exceeds admissible range (2*eps >= c0)") {}
};

class TooManyAtoms : public Error {
public:
    explicit TooManyAtoms(std::size_t n)
        : Error("brute-force oracle limited to 8 atoms, got " + std::to_string(n)) {}
};

class NonUniform : public Error {
public:
    NonUniform() : Error("oracle requires uniform atom masses") {}
};

class EmptyTemplateSet : public Error {
public:
    EmptyTemplateSet() : Error("template set is empty") {}
};

class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& what) : Error("length mismatch: " + what) {}
};

class KTooLarge : public Error {
public:
    KTooLarge() : Error("k exceeds reference set size") {}
};

class BadTemplateId : public Error {
public:
    explicit BadTemplateId(int id) : Error("template id must be 1..12, got " + std::to_string(id)) {}
};

class BadMagic : public Error {
public:
    explicit BadMagic(const std::string& what) : Error("bad magic: " + what) {}
};

class TruncatedFile : public Error {
public:
    explicit TruncatedFile(const std::string& path) : Error("truncated file: " + path) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

class ValueOutOfRange : public Error {
public:
    explicit ValueOutOfRange(const std::string& what) : Error("value out of range: " + what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

}  // namespace nrcdt
