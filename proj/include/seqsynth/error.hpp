#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqsynth {

enum class ErrorKind {
    unknown_symbol,
    alphabet_mismatch,
    foreign_state,
    empty_list,
    budget_exceeded,
    not_winning,
    not_sequential,
    not_synchronous,
    not_trim,
    inconsistent_decisions,
    invalid_loop,
    alphabet_clash,
    invalid_argument,
    parse_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace seqsynth
