#include "ppda/markov_chain.hpp"

#include "ppda/error.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace ppda
{

std::optional< distribution_violation > validate_distribution( const chain_generator& gen, const chain_state& s )
{
    const auto succ = gen.successors( s );
    if ( succ.empty() )
        return distribution_violation{ s, "no successors" };

    rational total;
    for ( const auto& t : succ )
    {
        if ( t.probability.sign() <= 0 || t.probability > rational{ 1 } )
            return distribution_violation{ s, "probability " + t.probability.to_string() + " to '" +
                                                  t.target.encoding + "' outside (0,1]" };
        total += t.probability;
    }
    if ( total != rational{ 1 } )
        return distribution_violation{ s, "successor mass " + total.to_string() + " != 1" };
    return std::nullopt;
}

rational path_probability( const chain_generator& gen, const finite_path& path )
{
    if ( path.states.empty() )
        throw error( error_kind::invalid_path, "empty path" );

    rational product{ 1 };
    for ( std::size_t i = 1; i < path.states.size(); ++i )
    {
        const auto& from = path.states[ i - 1 ];
        const auto& to = path.states[ i ];
        std::optional< rational > step;
        for ( const auto& t : gen.successors( from ) )
            if ( t.target == to )
            {
                step = t.probability;
                break;
            }
        if ( !step )
            throw error( error_kind::invalid_path,
                         "no transition '" + from.encoding + "' -> '" + to.encoding + "'" );
        product *= *step;
    }
    return product;
}

exploration explore( const chain_generator& gen, const chain_state& from, explore_limits limits )
{
    if ( limits.max_states == 0 || limits.max_depth == 0 )
        throw error( error_kind::invalid_argument, "exploration limits must be positive" );

    exploration result;
    std::unordered_set< chain_state > seen{ from };
    std::deque< std::pair< chain_state, std::size_t > > queue{ { from, 0 } };

    while ( !queue.empty() )
    {
        auto [ s, depth ] = std::move( queue.front() );
        queue.pop_front();

        if ( depth >= limits.max_depth || result.settled.size() >= limits.max_states )
        {
            result.frontier.insert( std::move( s ) );
            continue;
        }

        for ( auto& t : gen.successors( s ) )
            if ( seen.insert( t.target ).second )
                queue.emplace_back( std::move( t.target ), depth + 1 );
        result.settled.insert( std::move( s ) );
    }
    return result;
}

} // namespace ppda
