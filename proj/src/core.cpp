#include "emergence/core.hpp"

#include <cstdlib>
#include <limits>
#include <sstream>

namespace emergence {

std::uint64_t default_budget()
{
    static const std::uint64_t value = [] {
        const char* env = std::getenv("EMERGENCE_BUDGET");
        if (env == nullptr || *env == '\0')
            return kDefaultBudget;
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || parsed == 0)
            return kDefaultBudget;
        return static_cast<std::uint64_t>(parsed);
    }();
    return value;
}

BudgetExceeded::BudgetExceeded(const std::string& what, std::uint64_t estimate, std::uint64_t budget)
    : Error(what + " (estimated " + std::to_string(estimate) + " candidates, budget " + std::to_string(budget) + ")"),
      estimate_(estimate), budget_(budget)
{
}

ParseError::ParseError(std::string file, std::size_t line, std::size_t column, const std::string& message)
    : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      file_(std::move(file)), line_(line), column_(column)
{
}

void ValidationReport::add(std::string rule, std::vector<std::string> witness, std::string detail)
{
    violations.push_back({std::move(rule), std::move(witness), std::move(detail)});
}

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix)
{
    for (const auto& v : other.violations)
        violations.push_back({prefix.empty() ? v.rule : prefix + "." + v.rule, v.witness, v.detail});
}

std::string ValidationReport::summary() const
{
    if (ok())
        return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        if (i)
            out << "; ";
        out << v.rule << " (";
        for (std::size_t j = 0; j < v.witness.size(); ++j)
            out << (j ? ", " : "") << v.witness[j];
        out << ")";
        if (!v.detail.empty())
            out << ": " << v.detail;
    }
    return out.str();
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    if (a > std::numeric_limits<std::uint64_t>::max() / b)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        r = sat_mul(r, base);
        if (r == 0 || r == std::numeric_limits<std::uint64_t>::max())
            return r;
    }
    return r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
    if (a > std::numeric_limits<std::uint64_t>::max() - b)
        return std::numeric_limits<std::uint64_t>::max();
    return a + b;
}

} // namespace emergence
