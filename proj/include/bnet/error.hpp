#ifndef BNET_ERROR_HPP
#define BNET_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bnet {

/// Closed set of failure categories. The spelling returned by to_string() is
/// part of the CLI and HTTP contract and must not change.
enum class ErrorCode {
    parse_error,
    schema_error,
    validation_error,
    unknown_symbol,
    impossible_evidence,
    degenerate_baseline,
    size_limit,
    usage_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string locus = {})
        : std::runtime_error(std::move(message)), m_code(code), m_locus(std::move(locus)) {}

    ErrorCode code() const noexcept { return m_code; }
    const std::string& locus() const noexcept { return m_locus; }

private:
    ErrorCode m_code;
    std::string m_locus;
};

/// Raised by topological_order(); carries the variables of one cycle, with the
/// first variable repeated at the end.
class CycleError : public Error {
public:
    explicit CycleError(std::vector<std::string> cycle);

    const std::vector<std::string>& cycle() const noexcept { return m_cycle; }

private:
    std::vector<std::string> m_cycle;
};

}  // namespace bnet

#endif  // BNET_ERROR_HPP
