#pragma once

#include "ppda/rational.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ppda
{

// Canonical textual encoding of a state; equal encodings denote equal states.
struct chain_state
{
    std::string encoding;

    friend auto operator<=>( const chain_state&, const chain_state& ) = default;
};

struct transition
{
    chain_state target;
    rational probability;
};

using label_set = std::set< std::string >;

// A lazily unfolded, possibly infinite Markov chain. Successor lists must be
// non-empty, sum to exactly one and come in a deterministic order (the
// generators built in this library sort them by encoding).
class chain_generator
{
public:
    using successor_fn = std::function< std::vector< transition >( const chain_state& ) >;
    using label_fn = std::function< label_set( const chain_state& ) >;

private:
    chain_state _initial;
    successor_fn _successors;
    label_fn _labels;

public:
    chain_generator( chain_state initial, successor_fn successors, label_fn labels )
        : _initial{ std::move( initial ) }, _successors{ std::move( successors ) }, _labels{ std::move( labels ) } {}

    [[nodiscard]] const chain_state& initial() const { return _initial; }
    [[nodiscard]] std::vector< transition > successors( const chain_state& s ) const { return _successors( s ); }
    [[nodiscard]] label_set labels( const chain_state& s ) const { return _labels( s ); }
    [[nodiscard]] bool has_label( const chain_state& s, std::string_view name ) const
    {
        const auto l = labels( s );
        return l.find( std::string{ name } ) != l.end();
    }
};

struct distribution_violation
{
    chain_state state;
    std::string reason;
};

// Checks that every successor probability lies in (0,1] and that they sum to 1.
[[nodiscard]] std::optional< distribution_violation > validate_distribution( const chain_generator& gen,
                                                                             const chain_state& s );

struct finite_path
{
    std::vector< chain_state > states;
};

// Cylinder measure of the path: the product of its transition probabilities.
// Throws invalid_path when two adjacent states are not connected.
[[nodiscard]] rational path_probability( const chain_generator& gen, const finite_path& path );

struct explore_limits
{
    std::size_t max_states;
    std::size_t max_depth;
};

struct exploration
{
    std::set< chain_state > settled;  // expanded
    std::set< chain_state > frontier; // discovered, left unexpanded by the limits
};

// Breadth-first closure from `from`. A state is expanded when its depth is
// below max_depth and fewer than max_states states have been expanded.
[[nodiscard]] exploration explore( const chain_generator& gen, const chain_state& from, explore_limits limits );

} // namespace ppda

template<>
struct std::hash< ppda::chain_state >
{
    std::size_t operator()( const ppda::chain_state& s ) const noexcept { return std::hash< std::string >{}( s.encoding ); }
};
