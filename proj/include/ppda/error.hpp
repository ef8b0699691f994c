#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppda
{

enum class error_kind
{
    syntax_error,
    bound_out_of_range,
    invalid_path,
    invalid_argument,
    invalid_model,
    unknown_symbol,
    undeclared_proposition,
    degenerate_instance,
    index_out_of_range,
    domain_error,
    malformed_word,
    t_out_of_range,
    unresolved_path,
    unbound_placeholder,
    corpus_error,
};

[[nodiscard]] const char* to_string( error_kind kind );

// Every failure raised by the library carries one of the kinds above so that
// front ends can map it to an exit code without string matching.
class error : public std::runtime_error
{
    error_kind _kind;

public:
    error( error_kind kind, const std::string& message )
        : std::runtime_error{ std::string{ to_string( kind ) } + ": " + message }, _kind{ kind } {}

    [[nodiscard]] error_kind kind() const { return _kind; }
};

// Parse failures additionally record where they happened: a character offset
// for formulas, a 1-based line number for line-oriented files.
class syntax_error : public error
{
    std::size_t _position;

public:
    syntax_error( std::size_t position, const std::string& message )
        : error{ error_kind::syntax_error, "at " + std::to_string( position ) + ": " + message },
          _position{ position } {}

    [[nodiscard]] std::size_t position() const { return _position; }
};

} // namespace ppda
