// errors.hpp
// Exception types shared by every qfilter module.

#pragma once

#include <stdexcept>
#include <string>

namespace qfilter {

/// Base class of all library errors. `kind()` is a short stable tag used in
/// JSON reports and CLI messages.
class Error : public std::runtime_error {
public:
    Error(const char* kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    const char* kind() const noexcept { return kind_; }

private:
    const char* kind_;
};

#define QFILTER_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                                 \
    public:                                                                     \
        explicit Name(const std::string& what) : Error(#Name, what) {}          \
    };

QFILTER_DEFINE_ERROR(UnsupportedGate)
QFILTER_DEFINE_ERROR(IndexError)
QFILTER_DEFINE_ERROR(NormError)
QFILTER_DEFINE_ERROR(WeightError)
QFILTER_DEFINE_ERROR(DimError)
QFILTER_DEFINE_ERROR(HermiticityError)
QFILTER_DEFINE_ERROR(ZeroVectorError)
QFILTER_DEFINE_ERROR(DomainError)
QFILTER_DEFINE_ERROR(ParamShapeError)
QFILTER_DEFINE_ERROR(ClassBalanceError)
QFILTER_DEFINE_ERROR(FilterAnnihilated)
QFILTER_DEFINE_ERROR(ClassAnnihilated)
QFILTER_DEFINE_ERROR(ShapeError)
QFILTER_DEFINE_ERROR(IoError)

#undef QFILTER_DEFINE_ERROR

/// CSV parse failure; `line()` is 1-based and counts the header row.
class CsvError : public Error {
public:
    CsvError(std::size_t line, const std::string& what)
        : Error("CsvError", "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace qfilter
