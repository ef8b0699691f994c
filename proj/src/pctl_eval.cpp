#include "ppda/pctl_eval.hpp"

#include "ppda/error.hpp"

#include <deque>
#include <optional>

namespace ppda::pctl
{

namespace
{

template< class... Ts >
struct overloaded : Ts... { using Ts::operator()...; };
template< class... Ts >
overloaded( Ts... ) -> overloaded< Ts... >;

// Solves (I - A) x = b for one strongly connected block.
std::vector< rational > solve_dense( std::vector< std::vector< rational > > m, std::vector< rational > b )
{
    const std::size_t n = b.size();
    for ( std::size_t col = 0; col < n; ++col )
    {
        std::size_t pivot = col;
        while ( pivot < n && m[ pivot ][ col ].is_zero() )
            ++pivot;
        if ( pivot == n )
            throw error( error_kind::invalid_argument, "singular until system" );
        std::swap( m[ pivot ], m[ col ] );
        std::swap( b[ pivot ], b[ col ] );

        for ( std::size_t row = 0; row < n; ++row )
        {
            if ( row == col || m[ row ][ col ].is_zero() )
                continue;
            const rational factor = m[ row ][ col ] / m[ col ][ col ];
            for ( std::size_t k = col; k < n; ++k )
                m[ row ][ k ] -= factor * m[ col ][ k ];
            b[ row ] -= factor * b[ col ];
        }
    }
    for ( std::size_t i = 0; i < n; ++i )
        b[ i ] /= m[ i ][ i ];
    return b;
}

} // namespace

const char* to_string( three_valued v )
{
    switch ( v )
    {
    case three_valued::is_true: return "True";
    case three_valued::is_false: return "False";
    case three_valued::unknown: return "Unknown";
    }
    return "Unknown";
}

three_valued kleene_not( three_valued v )
{
    switch ( v )
    {
    case three_valued::is_true: return three_valued::is_false;
    case three_valued::is_false: return three_valued::is_true;
    case three_valued::unknown: return three_valued::unknown;
    }
    return three_valued::unknown;
}

three_valued kleene_and( three_valued a, three_valued b )
{
    if ( a == three_valued::is_false || b == three_valued::is_false )
        return three_valued::is_false;
    if ( a == three_valued::is_true && b == three_valued::is_true )
        return three_valued::is_true;
    return three_valued::unknown;
}

three_valued compare( const prob_interval& iv, comparison cmp, const rational& r )
{
    if ( cmp == comparison::gt )
    {
        if ( iv.lo > r )
            return three_valued::is_true;
        if ( iv.hi <= r )
            return three_valued::is_false;
        return three_valued::unknown;
    }
    if ( iv.lo == r && iv.hi == r )
        return three_valued::is_true;
    if ( r < iv.lo || r > iv.hi )
        return three_valued::is_false;
    return three_valued::unknown;
}

std::vector< rational > least_fixed_point( const std::vector< linear_node >& nodes )
{
    const std::size_t n = nodes.size();
    std::vector< rational > value( n );
    for ( std::size_t v = 0; v < n; ++v )
        if ( nodes[ v ].is_constant )
            value[ v ] = nodes[ v ].constant;

    // Iterative Tarjan over the sum nodes; components are emitted sinks first,
    // so every edge leaving a component points at an already solved node.
    constexpr std::size_t unvisited = static_cast< std::size_t >( -1 );
    std::vector< std::size_t > index( n, unvisited ), low( n, 0 ), component( n, unvisited );
    std::vector< bool > on_stack( n, false );
    std::vector< std::size_t > stack;
    std::size_t counter = 0;
    std::size_t components = 0;

    auto solve_component = [ & ]( const std::vector< std::size_t >& members ) {
        const std::size_t id = components++;
        for ( const auto v : members )
            component[ v ] = id;

        if ( members.size() == 1 )
        {
            const auto v = members.front();
            bool self_loop = false;
            rational external;
            rational self;
            for ( const auto& [ w, p ] : nodes[ v ].edges )
            {
                if ( w == v )
                {
                    self_loop = true;
                    self += p;
                }
                else
                    external += p * value[ w ];
            }
            if ( !self_loop )
            {
                value[ v ] = external;
                return;
            }
            value[ v ] = external.is_zero() ? rational{} : external / ( rational{ 1 } - self );
            return;
        }

        std::vector< std::size_t > local( n, unvisited );
        for ( std::size_t i = 0; i < members.size(); ++i )
            local[ members[ i ] ] = i;

        const std::size_t size = members.size();
        std::vector< std::vector< rational > > m( size, std::vector< rational >( size ) );
        std::vector< rational > b( size );
        bool any_input = false;
        for ( std::size_t i = 0; i < size; ++i )
        {
            m[ i ][ i ] = rational{ 1 };
            for ( const auto& [ w, p ] : nodes[ members[ i ] ].edges )
            {
                if ( component[ w ] == id )
                    m[ i ][ local[ w ] ] -= p;
                else
                    b[ i ] += p * value[ w ];
            }
            any_input = any_input || !b[ i ].is_zero();
        }
        if ( !any_input )
        {
            for ( const auto v : members )
                value[ v ] = rational{};
            return;
        }
        const auto x = solve_dense( std::move( m ), std::move( b ) );
        for ( std::size_t i = 0; i < size; ++i )
            value[ members[ i ] ] = x[ i ];
    };

    for ( std::size_t root = 0; root < n; ++root )
    {
        if ( nodes[ root ].is_constant || index[ root ] != unvisited )
            continue;

        std::vector< std::pair< std::size_t, std::size_t > > call{ { root, 0 } };
        index[ root ] = low[ root ] = counter++;
        stack.push_back( root );
        on_stack[ root ] = true;

        while ( !call.empty() )
        {
            auto& [ v, pos ] = call.back();
            const auto& edges = nodes[ v ].edges;
            if ( pos < edges.size() )
            {
                const auto w = edges[ pos++ ].first;
                if ( nodes[ w ].is_constant )
                    continue;
                if ( index[ w ] == unvisited )
                {
                    index[ w ] = low[ w ] = counter++;
                    stack.push_back( w );
                    on_stack[ w ] = true;
                    call.emplace_back( w, 0 );
                }
                else if ( on_stack[ w ] )
                    low[ v ] = std::min( low[ v ], index[ w ] );
                continue;
            }

            const auto finished = v;
            call.pop_back();
            if ( !call.empty() )
                low[ call.back().first ] = std::min( low[ call.back().first ], low[ finished ] );

            if ( low[ finished ] == index[ finished ] )
            {
                std::vector< std::size_t > members;
                std::size_t w = 0;
                do
                {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[ w ] = false;
                    members.push_back( w );
                } while ( w != finished );
                solve_component( members );
            }
        }
    }
    return value;
}

evaluator::evaluator( const chain_generator& gen, eval_budget budget ) : _gen{ gen }, _budget{ budget }
{
    if ( budget.max_states == 0 || budget.max_depth == 0 )
        throw error( error_kind::invalid_argument, "evaluation budget must be positive" );
}

evaluator::state_id evaluator::intern( const chain_state& s )
{
    const auto [ it, inserted ] = _ids.try_emplace( s.encoding, _states.size() );
    if ( inserted )
        _states.push_back( state_info{ s, false, false, {}, {} } );
    return it->second;
}

const std::vector< std::pair< evaluator::state_id, rational > >& evaluator::successors( state_id s )
{
    if ( !_states[ s ].expanded )
    {
        const auto succ = _gen.successors( _states[ s ].state );
        std::vector< std::pair< state_id, rational > > edges;
        edges.reserve( succ.size() );
        for ( const auto& t : succ )
            edges.emplace_back( intern( t.target ), t.probability );
        _states[ s ].successors = std::move( edges );
        _states[ s ].expanded = true;
    }
    return _states[ s ].successors;
}

const label_set& evaluator::labels( state_id s )
{
    if ( !_states[ s ].labelled )
    {
        _states[ s ].labels = _gen.labels( _states[ s ].state );
        _states[ s ].labelled = true;
    }
    return _states[ s ].labels;
}

void evaluator::pin( std::shared_ptr< const void > f )
{
    const void* key = f.get();
    _pinned.try_emplace( key, std::move( f ) );
}

three_valued evaluator::eval_state( const chain_state& s, const state_ptr& f )
{
    return eval( intern( s ), f );
}

prob_interval evaluator::prob_path( const chain_state& s, const path_ptr& f )
{
    return path( intern( s ), f );
}

prob_interval evaluator::prob_next( const chain_state& s, const state_ptr& f )
{
    return next( intern( s ), f );
}

prob_interval evaluator::prob_until( const chain_state& s, const state_ptr& hold, const state_ptr& goal )
{
    return until( intern( s ), hold, goal );
}

three_valued evaluator::eval( state_id s, const state_ptr& f )
{
    return std::visit(
        overloaded{
            []( const true_node& ) { return three_valued::is_true; },
            [ & ]( const atom_node& n ) {
                return labels( s ).count( n.name ) != 0 ? three_valued::is_true : three_valued::is_false;
            },
            [ & ]( const not_node& n ) { return kleene_not( eval( s, n.operand ) ); },
            [ & ]( const and_node& n ) {
                const auto left = eval( s, n.left );
                if ( left == three_valued::is_false )
                    return three_valued::is_false;
                return kleene_and( left, eval( s, n.right ) );
            },
            [ & ]( const prob_node& n ) {
                if ( n.bound.is_template() )
                    throw error( error_kind::unbound_placeholder,
                                 "bound " + n.bound.to_string() + " needs a value for t" );
                const std::pair< const void*, state_id > key{ f.get(), s };
                if ( const auto it = _prob_memo.find( key ); it != _prob_memo.end() )
                    return it->second;
                const auto result = compare( path( s, n.path ), n.cmp, n.bound.offset );
                if ( _prob_memo.emplace( key, result ).second )
                    pin( f );
                return result;
            },
        },
        f->node );
}

prob_interval evaluator::path( state_id s, const path_ptr& f )
{
    return std::visit( overloaded{
                           [ & ]( const next_node& n ) { return next( s, n.operand ); },
                           [ & ]( const until_node& n ) { return until( s, n.hold, n.goal ); },
                       },
                       f->node );
}

prob_interval evaluator::next( state_id s, const state_ptr& f )
{
    rational lo;
    rational hi;
    // copy: evaluating f may grow the state table
    const auto succ = successors( s );
    for ( const auto& [ target, p ] : succ )
    {
        switch ( eval( target, f ) )
        {
        case three_valued::is_true:
            lo += p;
            hi += p;
            break;
        case three_valued::unknown:
            hi += p;
            break;
        case three_valued::is_false:
            break;
        }
    }
    return { lo, hi };
}

prob_interval evaluator::until( state_id s, const state_ptr& hold, const state_ptr& goal )
{
    const until_key key{ hold.get(), goal.get(), s };
    if ( const auto it = _until_memo.find( key ); it != _until_memo.end() )
        return it->second;
    struct entry
    {
        state_id state;
        std::size_t depth;
        three_valued hold = three_valued::unknown;
        three_valued goal = three_valued::unknown;
        bool expanded = false;
        std::vector< std::pair< std::size_t, rational > > edges;
        std::optional< rational > known;
    };

    std::vector< entry > entries;
    std::unordered_map< state_id, std::size_t > index_of;
    std::deque< std::size_t > queue;
    std::size_t expanded = 0;

    auto discover = [ & ]( state_id state, std::size_t depth ) {
        const auto [ it, inserted ] = index_of.try_emplace( state, entries.size() );
        if ( inserted )
        {
            entries.push_back( entry{ state, depth, three_valued::unknown, three_valued::unknown, false, {}, {} } );
            // exact values found by earlier calls end the search here
            if ( const auto memo = _until_memo.find( { hold.get(), goal.get(), state } );
                 memo != _until_memo.end() && memo->second.is_point() )
                entries.back().known = memo->second.lo;
            else
                queue.push_back( it->second );
        }
        return it->second;
    };

    discover( s, 0 );
    while ( !queue.empty() )
    {
        const auto id = queue.front();
        queue.pop_front();
        const auto state = entries[ id ].state;
        const auto depth = entries[ id ].depth;

        const auto g = eval( state, goal );
        const auto h = g == three_valued::is_true ? three_valued::unknown : eval( state, hold );
        entries[ id ].goal = g;
        entries[ id ].hold = h;

        const bool need_lo = h == three_valued::is_true && g != three_valued::is_true;
        const bool need_hi = g == three_valued::is_false && h != three_valued::is_false;
        if ( !( need_lo || need_hi ) || depth >= _budget.max_depth || expanded >= _budget.max_states )
            continue;

        ++expanded;
        const auto succ = successors( state );
        std::vector< std::pair< std::size_t, rational > > edges;
        edges.reserve( succ.size() );
        for ( const auto& [ target, p ] : succ )
            edges.emplace_back( discover( target, depth + 1 ), p );
        entries[ id ].edges = std::move( edges );
        entries[ id ].expanded = true;
    }

    std::vector< linear_node > lower( entries.size() );
    std::vector< linear_node > upper( entries.size() );
    for ( std::size_t i = 0; i < entries.size(); ++i )
    {
        const auto& e = entries[ i ];
        if ( e.known )
        {
            lower[ i ].constant = *e.known;
            upper[ i ].constant = *e.known;
            continue;
        }
        const bool goal_true = e.goal == three_valued::is_true;
        const bool goal_false = e.goal == three_valued::is_false;
        const bool hold_true = e.hold == three_valued::is_true;
        const bool hold_false = e.hold == three_valued::is_false;

        if ( e.expanded && hold_true && !goal_true )
            lower[ i ] = linear_node{ false, {}, e.edges };
        else
            lower[ i ].constant = goal_true ? rational{ 1 } : rational{};

        if ( e.expanded && goal_false && !hold_false )
            upper[ i ] = linear_node{ false, {}, e.edges };
        else
            upper[ i ].constant = ( goal_false && hold_false ) ? rational{} : rational{ 1 };
    }

    const auto lo = least_fixed_point( lower );
    const auto hi = least_fixed_point( upper );
    prob_interval result{ lo.front(), hi.front() };
    _until_memo.emplace( key, result );
    // bounds are sound at every discovered state, so points there are exact
    for ( std::size_t i = 1; i < entries.size(); ++i )
        if ( !entries[ i ].known && lo[ i ] == hi[ i ] )
            _until_memo.emplace( until_key{ hold.get(), goal.get(), entries[ i ].state }, prob_interval{ lo[ i ], hi[ i ] } );
    pin( hold );
    pin( goal );
    return result;
}

three_valued eval_state( const chain_generator& gen, const chain_state& s, const state_ptr& f, eval_budget budget )
{
    evaluator ev{ gen, budget };
    return ev.eval_state( s, f );
}

prob_interval prob_next( const chain_generator& gen, const chain_state& s, const state_ptr& f, eval_budget budget )
{
    evaluator ev{ gen, budget };
    return ev.prob_next( s, f );
}

prob_interval prob_until( const chain_generator& gen, const chain_state& s, const state_ptr& hold,
                          const state_ptr& goal, eval_budget budget )
{
    evaluator ev{ gen, budget };
    return ev.prob_until( s, hold, goal );
}

} // namespace ppda::pctl
