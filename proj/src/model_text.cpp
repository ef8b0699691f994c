#include "ppda/error.hpp"
#include "ppda/pushdown.hpp"

#include <cctype>
#include <sstream>

namespace ppda
{

namespace
{

bool valid_symbol( std::string_view s )
{
    if ( s.empty() || s == "~" )
        return false;
    for ( const char c : s )
        if ( !( std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' || c == '(' || c == ')' || c == ',' ||
                c == '\'' ) )
            return false;
    return true;
}

struct raw_rule
{
    std::optional< std::string > from;
    symbol head;
    std::optional< std::string > to;
    std::vector< symbol > body;
    rational probability;
};

std::pair< std::optional< std::string >, std::string > split_state( const std::string& token, std::size_t line )
{
    const auto colon = token.find( ':' );
    if ( colon == std::string::npos )
        return { std::nullopt, token };
    auto state = token.substr( 0, colon );
    if ( state.empty() || !valid_symbol( state ) )
        throw syntax_error( line, "bad control state in '" + token + "'" );
    return { std::move( state ), token.substr( colon + 1 ) };
}

raw_rule parse_rule( const std::string& text, std::size_t line )
{
    std::istringstream in{ text };
    std::vector< std::string > tokens;
    for ( std::string t; in >> t; )
        tokens.push_back( std::move( t ) );

    if ( tokens.size() < 4 || tokens[ 1 ] != "->" )
        throw syntax_error( line, "expected 'HEAD -> BODY [RAT]'" );
    const auto& last = tokens.back();
    if ( last.size() < 3 || last.front() != '[' || last.back() != ']' )
        throw syntax_error( line, "expected probability in brackets, found '" + last + "'" );

    raw_rule r;
    try
    {
        r.probability = rational::parse( std::string_view{ last }.substr( 1, last.size() - 2 ) );
    }
    catch ( const syntax_error& )
    {
        throw syntax_error( line, "bad probability '" + last + "'" );
    }

    auto [ from, head ] = split_state( tokens[ 0 ], line );
    if ( !valid_symbol( head ) )
        throw syntax_error( line, "bad head symbol '" + tokens[ 0 ] + "'" );
    r.from = std::move( from );
    r.head = std::move( head );

    for ( std::size_t i = 2; i + 1 < tokens.size(); ++i )
    {
        auto token = tokens[ i ];
        if ( i == 2 )
        {
            auto [ to, rest ] = split_state( token, line );
            r.to = std::move( to );
            token = std::move( rest );
        }
        else if ( token.find( ':' ) != std::string::npos )
            throw syntax_error( line, "control state only allowed on the first body symbol" );

        if ( token == "~" )
        {
            if ( tokens.size() != 4 )
                throw syntax_error( line, "'~' must be the whole body" );
            continue;
        }
        if ( !valid_symbol( token ) )
            throw syntax_error( line, "bad symbol '" + token + "'" );
        r.body.push_back( std::move( token ) );
    }

    if ( r.from.has_value() != r.to.has_value() )
        throw syntax_error( line, "control state must appear on both sides or neither" );
    return r;
}

void write_body( std::ostream& out, const std::optional< std::string >& state, const std::vector< symbol >& body )
{
    if ( state )
        out << *state << ':';
    if ( body.empty() )
    {
        out << '~';
        return;
    }
    for ( std::size_t i = 0; i < body.size(); ++i )
        out << ( i ? " " : "" ) << body[ i ];
}

} // namespace

model parse_model( std::string_view text )
{
    std::vector< raw_rule > rules;
    std::optional< bool > stateful;
    std::istringstream in{ std::string{ text } };
    std::size_t line_no = 0;
    for ( std::string line; std::getline( in, line ); )
    {
        ++line_no;
        if ( const auto hash = line.find( '#' ); hash != std::string::npos )
            line.erase( hash );
        if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
            continue;

        auto r = parse_rule( line, line_no );
        if ( stateful && *stateful != r.from.has_value() )
            throw syntax_error( line_no, "mixes pBPA and pPDS rules" );
        stateful = r.from.has_value();
        rules.push_back( std::move( r ) );
    }

    if ( stateful.value_or( false ) )
    {
        std::vector< ppds_rule > out;
        for ( auto& r : rules )
            out.push_back( { std::move( *r.from ), std::move( r.head ), std::move( *r.to ), std::move( r.body ),
                             std::move( r.probability ) } );
        return ppds{ std::move( out ) };
    }
    std::vector< bpa_rule > out;
    for ( auto& r : rules )
        out.push_back( { std::move( r.head ), std::move( r.body ), std::move( r.probability ) } );
    return bpa{ std::move( out ) };
}

std::string serialize_model( const model& m )
{
    std::ostringstream out;
    if ( const auto* b = std::get_if< bpa >( &m ) )
    {
        for ( const auto& r : b->rules() )
        {
            out << r.head << " -> ";
            write_body( out, std::nullopt, r.body );
            out << " [" << r.probability << "]\n";
        }
        return out.str();
    }
    for ( const auto& r : std::get< ppds >( m ).rules() )
    {
        out << r.from << ':' << r.head << " -> ";
        write_body( out, r.to, r.body );
        out << " [" << r.probability << "]\n";
    }
    return out.str();
}

} // namespace ppda
