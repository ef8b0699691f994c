#include "ppda/error.hpp"

namespace ppda
{

const char* to_string( error_kind kind )
{
    switch ( kind )
    {
    case error_kind::syntax_error: return "syntax-error";
    case error_kind::bound_out_of_range: return "bound-out-of-range";
    case error_kind::invalid_path: return "invalid-path";
    case error_kind::invalid_argument: return "invalid-argument";
    case error_kind::invalid_model: return "invalid-model";
    case error_kind::unknown_symbol: return "unknown-symbol";
    case error_kind::undeclared_proposition: return "undeclared-proposition";
    case error_kind::degenerate_instance: return "degenerate-instance";
    case error_kind::index_out_of_range: return "index-out-of-range";
    case error_kind::domain_error: return "domain-error";
    case error_kind::malformed_word: return "malformed-word";
    case error_kind::t_out_of_range: return "t-out-of-open-interval";
    case error_kind::unresolved_path: return "unresolved-path";
    case error_kind::unbound_placeholder: return "unbound-placeholder";
    case error_kind::corpus_error: return "corpus-error";
    }
    return "error";
}

} // namespace ppda
