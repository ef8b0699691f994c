#include "ppda/pushdown.hpp"

#include "ppda/error.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace ppda
{

namespace
{

template< class... Ts >
struct overloaded : Ts... { using Ts::operator()...; };
template< class... Ts >
overloaded( Ts... ) -> overloaded< Ts... >;

std::string join( const std::vector< symbol >& word )
{
    if ( word.empty() )
        return "~";
    std::string out;
    for ( const auto& s : word )
    {
        if ( !out.empty() )
            out += ' ';
        out += s;
    }
    return out;
}

std::vector< weighted_configuration > sorted( std::vector< weighted_configuration > succ )
{
    std::vector< std::pair< std::string, std::size_t > > keys;
    keys.reserve( succ.size() );
    for ( std::size_t i = 0; i < succ.size(); ++i )
        keys.emplace_back( succ[ i ].config.encode(), i );
    std::sort( keys.begin(), keys.end() );

    // identical targets reached by different rules are merged into one edge
    std::vector< weighted_configuration > merged;
    merged.reserve( succ.size() );
    for ( std::size_t k = 0; k < keys.size(); ++k )
    {
        auto& s = succ[ keys[ k ].second ];
        if ( k > 0 && keys[ k - 1 ].first == keys[ k ].first )
            merged.back().probability += s.probability;
        else
            merged.push_back( std::move( s ) );
    }
    return merged;
}

configuration rewrite( const configuration& c, std::optional< std::string > control, const std::vector< symbol >& body )
{
    configuration next{ std::move( control ), {} };
    next.stack.reserve( c.stack.size() - 1 + body.size() );
    next.stack.insert( next.stack.end(), body.begin(), body.end() );
    next.stack.insert( next.stack.end(), c.stack.begin() + 1, c.stack.end() );
    return next;
}

void check_mass( validation_report& report, const std::string& head, const std::vector< rational >& probabilities )
{
    rational total;
    for ( const auto& p : probabilities )
    {
        if ( p.sign() <= 0 || p > rational{ 1 } )
            report.violations.push_back( "rule for " + head + " has probability " + p.to_string() + " outside (0,1]" );
        total += p;
    }
    if ( total != rational{ 1 } )
        report.violations.push_back( "rules for " + head + " have total mass " + total.to_string() );
}

} // namespace

std::string configuration::encode() const
{
    return control ? *control + ":" + join( stack ) : join( stack );
}

configuration configuration::decode( std::string_view text )
{
    configuration c;
    std::string body{ text };
    if ( const auto colon = body.find( ':' ); colon != std::string::npos )
    {
        c.control = body.substr( 0, colon );
        body = body.substr( colon + 1 );
        if ( c.control->empty() )
            throw syntax_error( 0, "empty control state in configuration '" + std::string{ text } + "'" );
    }
    std::istringstream in{ body };
    for ( std::string sym; in >> sym; )
    {
        if ( sym == "~" )
            continue;
        c.stack.push_back( std::move( sym ) );
    }
    return c;
}

bpa::bpa( std::vector< bpa_rule > rules ) : _rules{ std::move( rules ) }
{
    for ( std::size_t i = 0; i < _rules.size(); ++i )
    {
        _by_head[ _rules[ i ].head ].push_back( i );
        _alphabet.insert( _rules[ i ].head );
        _alphabet.insert( _rules[ i ].body.begin(), _rules[ i ].body.end() );
    }
}

std::vector< const bpa_rule* > bpa::rules_for( const symbol& head ) const
{
    std::vector< const bpa_rule* > out;
    if ( const auto it = _by_head.find( head ); it != _by_head.end() )
        for ( const auto i : it->second )
            out.push_back( &_rules[ i ] );
    return out;
}

ppds::ppds( std::vector< ppds_rule > rules ) : _rules{ std::move( rules ) }
{
    for ( std::size_t i = 0; i < _rules.size(); ++i )
    {
        const auto& r = _rules[ i ];
        _by_head[ { r.from, r.head } ].push_back( i );
        _states.insert( r.from );
        _states.insert( r.to );
        _alphabet.insert( r.head );
        _alphabet.insert( r.body.begin(), r.body.end() );
    }
}

std::vector< const ppds_rule* > ppds::rules_for( const std::string& state, const symbol& head ) const
{
    std::vector< const ppds_rule* > out;
    if ( const auto it = _by_head.find( { state, head } ); it != _by_head.end() )
        for ( const auto i : it->second )
            out.push_back( &_rules[ i ] );
    return out;
}

ppds embed( const bpa& m, const std::string& state )
{
    std::vector< ppds_rule > rules;
    rules.reserve( m.rules().size() );
    for ( const auto& r : m.rules() )
        rules.push_back( { state, r.head, state, r.body, r.probability } );
    return ppds{ std::move( rules ) };
}

validation_report validate_model( const bpa& m )
{
    validation_report report;
    for ( const auto& r : m.rules() )
        if ( r.body.size() > 2 )
            report.violations.push_back( "rule for " + r.head + " pushes " + std::to_string( r.body.size() ) +
                                         " symbols (at most 2 allowed)" );
    for ( const auto& x : m.alphabet() )
    {
        const auto rules = m.rules_for( x );
        if ( rules.empty() )
        {
            report.violations.push_back( "symbol " + x + " has no rule" );
            continue;
        }
        std::vector< rational > probabilities;
        for ( const auto* r : rules )
            probabilities.push_back( r->probability );
        check_mass( report, x, probabilities );
    }
    return report;
}

validation_report validate_model( const ppds& m )
{
    validation_report report;
    for ( const auto& r : m.rules() )
        if ( r.body.size() > 2 )
            report.violations.push_back( "rule for " + r.from + ":" + r.head + " pushes " +
                                         std::to_string( r.body.size() ) + " symbols (at most 2 allowed)" );
    for ( const auto& q : m.states() )
        for ( const auto& x : m.alphabet() )
        {
            const auto rules = m.rules_for( q, x );
            const auto head = q + ":" + x;
            if ( rules.empty() )
            {
                report.violations.push_back( "head " + head + " has no rule" );
                continue;
            }
            std::vector< rational > probabilities;
            for ( const auto* r : rules )
                probabilities.push_back( r->probability );
            check_mass( report, head, probabilities );
        }
    return report;
}

validation_report validate_model( const model& m )
{
    return std::visit( []( const auto& x ) { return validate_model( x ); }, m );
}

std::vector< weighted_configuration > step( const bpa& m, const configuration& c )
{
    if ( c.control )
        throw error( error_kind::invalid_argument, "pBPA configuration with control state '" + *c.control + "'" );
    if ( c.empty() )
        return { { c, rational{ 1 } } };

    const auto rules = m.rules_for( c.top() );
    if ( rules.empty() )
        throw error( error_kind::unknown_symbol, "no rule for head '" + c.top() + "'" );

    std::vector< weighted_configuration > succ;
    succ.reserve( rules.size() );
    for ( const auto* r : rules )
        succ.push_back( { rewrite( c, std::nullopt, r->body ), r->probability } );
    return sorted( std::move( succ ) );
}

std::vector< weighted_configuration > step( const ppds& m, const configuration& c )
{
    if ( !c.control )
        throw error( error_kind::invalid_argument, "pPDS configuration without control state" );
    if ( c.empty() )
        return { { c, rational{ 1 } } };

    const auto rules = m.rules_for( *c.control, c.top() );
    if ( rules.empty() )
        throw error( error_kind::unknown_symbol, "no rule for head '" + *c.control + ":" + c.top() + "'" );

    std::vector< weighted_configuration > succ;
    succ.reserve( rules.size() );
    for ( const auto* r : rules )
        succ.push_back( { rewrite( c, r->to, r->body ), r->probability } );
    return sorted( std::move( succ ) );
}

std::vector< weighted_configuration > step( const model& m, const configuration& c )
{
    return std::visit( [ & ]( const auto& x ) { return step( x, c ); }, m );
}

simple_assignment simple_assignment::symbol_propositions( const model& m )
{
    simple_assignment nu;
    std::visit( overloaded{
                    [ & ]( const bpa& x ) {
                        for ( const auto& s : x.alphabet() )
                            nu.add( s, { std::nullopt, s } );
                    },
                    [ & ]( const ppds& x ) {
                        for ( const auto& q : x.states() )
                            for ( const auto& s : x.alphabet() )
                                nu.add( q + ":" + s, { q, s } );
                    },
                },
                m );
    return nu;
}

bool dfa::accepts( std::span< const symbol > word ) const
{
    std::size_t state = _initial;
    for ( const auto& letter : word )
    {
        const auto it = _delta.find( { state, letter } );
        if ( it == _delta.end() )
            return false;
        state = it->second;
    }
    return _accepting.count( state ) != 0;
}

namespace
{

bool regular_holds( const dfa& a, const configuration& c )
{
    std::vector< symbol > word;
    word.reserve( c.stack.size() + 1 );
    if ( c.control )
        word.push_back( *c.control );
    word.insert( word.end(), c.stack.rbegin(), c.stack.rend() );
    return a.accepts( word );
}

} // namespace

bool eval_assignment( const assignment& nu, const std::string& proposition, const configuration& c )
{
    return std::visit( overloaded{
                           [ & ]( const simple_assignment& s ) {
                               if ( !s.declared( proposition ) )
                                   throw error( error_kind::undeclared_proposition, proposition );
                               if ( c.empty() )
                                   return false;
                               return s.heads().at( proposition ).count( head_pattern{ c.control, c.top() } ) != 0;
                           },
                           [ & ]( const regular_assignment& r ) {
                               if ( !r.declared( proposition ) )
                                   throw error( error_kind::undeclared_proposition, proposition );
                               if ( c.empty() )
                                   return false;
                               return regular_holds( r.automata().at( proposition ), c );
                           },
                       },
                       nu );
}

label_set labels( const assignment& nu, const configuration& c )
{
    if ( c.empty() )
        return {};
    return std::visit( overloaded{
                           [ & ]( const simple_assignment& s ) { return s.labels_of( { c.control, c.top() } ); },
                           [ & ]( const regular_assignment& r ) {
                               label_set out;
                               for ( const auto& [ p, a ] : r.automata() )
                                   if ( regular_holds( a, c ) )
                                       out.insert( p );
                               return out;
                           },
                       },
                       nu );
}

chain_generator induced_chain( const model& m, const assignment& nu, const configuration& start )
{
    if ( const auto report = validate_model( m ); !report.ok() )
    {
        std::string message;
        for ( const auto& v : report.violations )
            message += ( message.empty() ? "" : "; " ) + v;
        throw error( error_kind::invalid_model, message );
    }

    return induced_chain( std::make_shared< const model >( m ), std::make_shared< const assignment >( nu ), start );
}

chain_generator induced_chain( std::shared_ptr< const model > m, std::shared_ptr< const assignment > nu,
                               const configuration& start )
{
    auto successors = [ m ]( const chain_state& s ) {
        std::vector< transition > out;
        for ( auto& w : step( *m, configuration::decode( s.encoding ) ) )
            out.push_back( { w.config.state(), std::move( w.probability ) } );
        return out;
    };
    auto label_fn = [ nu ]( const chain_state& s ) { return labels( *nu, configuration::decode( s.encoding ) ); };
    return chain_generator{ start.state(), std::move( successors ), std::move( label_fn ) };
}

} // namespace ppda
