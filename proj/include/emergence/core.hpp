#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace emergence {

using Index = std::size_t;
inline constexpr Index npos = static_cast<Index>(-1);

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

// Budget used when a caller does not pass one. Reads EMERGENCE_BUDGET once.
std::uint64_t default_budget();

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: duplicate names, out-of-range references, size mismatch.
class StructuralError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t estimate, std::uint64_t budget);
    std::uint64_t estimate() const { return estimate_; }
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t estimate_;
    std::uint64_t budget_;
};

class ModeMismatch : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column, const std::string& message);
    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

struct Violation {
    std::string rule;
    std::vector<std::string> witness;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string rule, std::vector<std::string> witness, std::string detail = {});
    void merge(const ValidationReport& other, const std::string& prefix = {});
    std::string summary() const;
};

// Saturating arithmetic for size estimates.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp);
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b);

} // namespace emergence
