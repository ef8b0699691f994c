#pragma once

#include "ppda/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ppda::pctl
{

enum class comparison
{
    gt,
    eq,
};

// Probability bound of a P operator. Concrete bounds have slope 0; a non-zero
// slope marks a template `offset + slope * t` that must be bound to a value of
// t before evaluation. Serialized as a rational, or as `?t[*slope][+offset]`.
struct prob_bound
{
    rational offset;
    rational slope;

    [[nodiscard]] static prob_bound constant( rational value ) { return { std::move( value ), rational{} }; }
    [[nodiscard]] static prob_bound affine( rational offset, rational slope ) { return { std::move( offset ), std::move( slope ) }; }

    [[nodiscard]] bool is_template() const { return !slope.is_zero(); }
    [[nodiscard]] rational at( const rational& t ) const { return offset + slope * t; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==( const prob_bound&, const prob_bound& ) = default;
};

struct state_formula;
struct path_formula;
using state_ptr = std::shared_ptr< const state_formula >;
using path_ptr = std::shared_ptr< const path_formula >;

struct true_node {};
struct atom_node { std::string name; };
struct not_node { state_ptr operand; };
struct and_node { state_ptr left; state_ptr right; };
struct prob_node
{
    comparison cmp;
    prob_bound bound;
    path_ptr path;
};

struct state_formula
{
    std::variant< true_node, atom_node, not_node, and_node, prob_node > node;
};

struct next_node { state_ptr operand; };
struct until_node { state_ptr hold; state_ptr goal; };

struct path_formula
{
    std::variant< next_node, until_node > node;
};

[[nodiscard]] state_ptr truth();
[[nodiscard]] state_ptr atom( std::string name );
[[nodiscard]] state_ptr negation( state_ptr f );
[[nodiscard]] state_ptr conjunction( state_ptr a, state_ptr b );
// Right-nested conjunction of a non-empty list.
[[nodiscard]] state_ptr conjunction( const std::vector< state_ptr >& fs );
// De Morgan encoding (the grammar has no disjunction).
[[nodiscard]] state_ptr disjunction( const std::vector< state_ptr >& fs );
[[nodiscard]] state_ptr prob( comparison cmp, prob_bound bound, path_ptr path );
[[nodiscard]] path_ptr next( state_ptr f );
[[nodiscard]] path_ptr until( state_ptr hold, state_ptr goal );

[[nodiscard]] std::string to_string( const state_ptr& f );
[[nodiscard]] std::string to_string( const path_ptr& f );

// Throws syntax_error (with character offset) or bound_out_of_range.
[[nodiscard]] state_ptr parse_formula( std::string_view text );
[[nodiscard]] path_ptr parse_path_formula( std::string_view text );

[[nodiscard]] bool has_placeholder( const state_ptr& f );
[[nodiscard]] bool has_placeholder( const path_ptr& f );

// Replaces every template bound by its value at t. Throws bound_out_of_range
// if an instantiated bound leaves [0,1].
[[nodiscard]] state_ptr bind_placeholder( const state_ptr& f, const rational& t );

// Pre-order search for the first P operator, descending through not/and.
[[nodiscard]] const prob_node* outermost_prob( const state_ptr& f );

} // namespace ppda::pctl
