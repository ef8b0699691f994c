#pragma once

#include "ppda/markov_chain.hpp"
#include "ppda/pctl.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ppda::pctl
{

enum class three_valued
{
    is_false,
    is_true,
    unknown,
};

[[nodiscard]] const char* to_string( three_valued v ); // "True" / "False" / "Unknown"
[[nodiscard]] three_valued kleene_not( three_valued v );
[[nodiscard]] three_valued kleene_and( three_valued a, three_valued b );

// The exact probability lies in [lo, hi], 0 <= lo <= hi <= 1.
struct prob_interval
{
    rational lo;
    rational hi;

    [[nodiscard]] bool is_point() const { return lo == hi; }
    [[nodiscard]] std::string to_string() const { return "[" + lo.to_string() + "," + hi.to_string() + "]"; }

    friend bool operator==( const prob_interval&, const prob_interval& ) = default;
};

// GT: true if lo > r, false if hi <= r. EQ: true if lo = hi = r, false if r lies
// outside [lo, hi]. Unknown otherwise.
[[nodiscard]] three_valued compare( const prob_interval& iv, comparison cmp, const rational& r );

struct eval_budget
{
    std::size_t max_states;
    std::size_t max_depth;
};

// Bounded three-valued PCTL evaluator. Each Until is evaluated over the part of
// the chain reachable within the budget; unexplored states contribute [0,1].
// Every nested P operator receives the same budget. Memo tables live as long
// as the evaluator, so use one evaluator per top-level query.
class evaluator
{
    const chain_generator& _gen;
    eval_budget _budget;

    using state_id = std::size_t;

    struct state_info
    {
        chain_state state;
        bool expanded = false;
        bool labelled = false;
        label_set labels;
        std::vector< std::pair< state_id, rational > > successors;
    };

    struct pair_hash
    {
        std::size_t operator()( const std::pair< const void*, state_id >& k ) const noexcept
        {
            return std::hash< const void* >{}( k.first ) ^ ( k.second * 0x9e3779b97f4a7c15ULL );
        }
    };
    struct until_key
    {
        const void* hold;
        const void* goal;
        state_id state;

        friend bool operator==( const until_key&, const until_key& ) = default;
    };
    struct until_hash
    {
        std::size_t operator()( const until_key& k ) const noexcept
        {
            return std::hash< const void* >{}( k.hold ) ^ ( std::hash< const void* >{}( k.goal ) * 7U ) ^
                   ( k.state * 0x9e3779b97f4a7c15ULL );
        }
    };

    std::vector< state_info > _states;
    std::unordered_map< std::string, state_id > _ids;
    // Memo keys are formula addresses; every memoized formula is kept alive
    // here so an address cannot be recycled by a different formula.
    std::unordered_map< const void*, std::shared_ptr< const void > > _pinned;
    std::unordered_map< std::pair< const void*, state_id >, three_valued, pair_hash > _prob_memo;
    std::unordered_map< until_key, prob_interval, until_hash > _until_memo;

public:
    evaluator( const chain_generator& gen, eval_budget budget );

    [[nodiscard]] three_valued eval_state( const chain_state& s, const state_ptr& f );
    [[nodiscard]] prob_interval prob_path( const chain_state& s, const path_ptr& f );
    [[nodiscard]] prob_interval prob_next( const chain_state& s, const state_ptr& f );
    [[nodiscard]] prob_interval prob_until( const chain_state& s, const state_ptr& hold, const state_ptr& goal );

private:
    state_id intern( const chain_state& s );
    const std::vector< std::pair< state_id, rational > >& successors( state_id s );
    const label_set& labels( state_id s );
    void pin( std::shared_ptr< const void > f );

    three_valued eval( state_id s, const state_ptr& f );
    prob_interval path( state_id s, const path_ptr& f );
    prob_interval next( state_id s, const state_ptr& f );
    prob_interval until( state_id s, const state_ptr& hold, const state_ptr& goal );
};

[[nodiscard]] three_valued eval_state( const chain_generator& gen, const chain_state& s, const state_ptr& f,
                                       eval_budget budget );
[[nodiscard]] prob_interval prob_next( const chain_generator& gen, const chain_state& s, const state_ptr& f,
                                       eval_budget budget );
[[nodiscard]] prob_interval prob_until( const chain_generator& gen, const chain_state& s, const state_ptr& hold,
                                        const state_ptr& goal, eval_budget budget );

// Least solution of x = b + A x on a finite graph, used for Until bounds.
// Nodes are either constants or weighted sums over other nodes.
struct linear_node
{
    bool is_constant = true;
    rational constant;
    std::vector< std::pair< std::size_t, rational > > edges;
};

[[nodiscard]] std::vector< rational > least_fixed_point( const std::vector< linear_node >& nodes );

} // namespace ppda::pctl
