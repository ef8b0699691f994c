#include "ppda/pctl.hpp"

#include "ppda/error.hpp"

#include <cctype>
#include <sstream>

namespace ppda::pctl
{

namespace
{

template< class... Ts >
struct overloaded : Ts... { using Ts::operator()...; };
template< class... Ts >
overloaded( Ts... ) -> overloaded< Ts... >;

bool is_name_char( char c )
{
    return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' || c == '(' || c == ')' || c == ':' ||
           c == ',' || c == '\'';
}

void check_range( const rational& value, std::size_t position )
{
    if ( value.sign() < 0 || value > rational{ 1 } )
        throw error( error_kind::bound_out_of_range,
                     "bound " + value.to_string() + " at " + std::to_string( position ) + " outside [0,1]" );
}

class parser
{
    std::string_view _text;
    std::size_t _pos = 0;

public:
    explicit parser( std::string_view text ) : _text{ text } {}

    state_ptr state()
    {
        skip_ws();
        const auto start = _pos;
        if ( peek() != '(' )
        {
            const auto word = bare_token();
            if ( word == "true" )
                return truth();
            throw syntax_error( start, "expected 'true' or '(' but found '" + std::string{ word } + "'" );
        }

        ++_pos;
        const auto keyword = bare_token();
        if ( keyword == "ap" )
        {
            skip_ws();
            const auto name_start = _pos;
            auto name = atom_name();
            if ( name.empty() )
                throw syntax_error( name_start, "expected proposition name" );
            close();
            return atom( std::move( name ) );
        }
        if ( keyword == "not" )
        {
            auto operand = state();
            close();
            return negation( std::move( operand ) );
        }
        if ( keyword == "and" )
        {
            auto left = state();
            auto right = state();
            close();
            return conjunction( std::move( left ), std::move( right ) );
        }
        if ( keyword == "P>" || keyword == "P=" )
        {
            skip_ws();
            const auto bound_start = _pos;
            auto b = bound( bare_token(), bound_start );
            auto p = path();
            close();
            return prob( keyword == "P>" ? comparison::gt : comparison::eq, std::move( b ), std::move( p ) );
        }
        throw syntax_error( start + 1, "unknown operator '" + std::string{ keyword } + "'" );
    }

    path_ptr path()
    {
        skip_ws();
        if ( peek() != '(' )
            throw syntax_error( _pos, "expected '(' opening a path formula" );
        const auto start = _pos++;
        const auto keyword = bare_token();
        if ( keyword == "X" )
        {
            auto operand = state();
            close();
            return next( std::move( operand ) );
        }
        if ( keyword == "U" )
        {
            auto hold = state();
            auto goal = state();
            close();
            return until( std::move( hold ), std::move( goal ) );
        }
        throw syntax_error( start + 1, "expected X or U but found '" + std::string{ keyword } + "'" );
    }

    void finish()
    {
        skip_ws();
        if ( _pos != _text.size() )
            throw syntax_error( _pos, "trailing input" );
    }

private:
    [[nodiscard]] char peek() const { return _pos < _text.size() ? _text[ _pos ] : '\0'; }

    void skip_ws()
    {
        while ( _pos < _text.size() && std::isspace( static_cast< unsigned char >( _text[ _pos ] ) ) )
            ++_pos;
    }

    std::string_view bare_token()
    {
        const auto start = _pos;
        while ( _pos < _text.size() && !std::isspace( static_cast< unsigned char >( _text[ _pos ] ) ) &&
                _text[ _pos ] != '(' && _text[ _pos ] != ')' )
            ++_pos;
        return _text.substr( start, _pos - start );
    }

    // Names may contain balanced parentheses, e.g. X(A,_).
    std::string atom_name()
    {
        const auto start = _pos;
        int depth = 0;
        while ( _pos < _text.size() && is_name_char( _text[ _pos ] ) )
        {
            const char c = _text[ _pos ];
            if ( c == '(' )
                ++depth;
            else if ( c == ')' )
            {
                if ( depth == 0 )
                    break;
                --depth;
            }
            ++_pos;
        }
        if ( depth != 0 )
            throw syntax_error( _pos, "unbalanced parenthesis in proposition name" );
        return std::string{ _text.substr( start, _pos - start ) };
    }

    void close()
    {
        skip_ws();
        if ( peek() != ')' )
            throw syntax_error( _pos, "expected ')'" );
        ++_pos;
    }

    static prob_bound bound( std::string_view token, std::size_t position )
    {
        if ( token.empty() )
            throw syntax_error( position, "expected probability bound" );
        try
        {
            if ( token.front() != '?' )
            {
                auto value = rational::parse( token );
                check_range( value, position );
                return prob_bound::constant( std::move( value ) );
            }
            if ( token.substr( 0, 2 ) != "?t" )
                throw syntax_error( position, "unknown placeholder '" + std::string{ token } + "'" );
            auto rest = token.substr( 2 );
            rational slope{ 1 };
            rational offset;
            if ( !rest.empty() && rest.front() == '*' )
            {
                rest.remove_prefix( 1 );
                // the slope may itself carry a sign, so search for '+' after it
                const auto plus = rest.find( '+', 1 );
                slope = rational::parse( rest.substr( 0, plus ) );
                rest = plus == std::string_view::npos ? std::string_view{} : rest.substr( plus );
            }
            if ( !rest.empty() )
            {
                if ( rest.front() != '+' )
                    throw syntax_error( position, "malformed placeholder '" + std::string{ token } + "'" );
                offset = rational::parse( rest.substr( 1 ) );
            }
            if ( slope.is_zero() )
                throw syntax_error( position, "placeholder with zero slope" );
            return prob_bound::affine( std::move( offset ), std::move( slope ) );
        }
        catch ( const syntax_error& e )
        {
            if ( e.position() == position )
                throw;
            throw syntax_error( position, "malformed bound '" + std::string{ token } + "'" );
        }
    }
};

void write( std::ostream& out, const state_ptr& f );

void write( std::ostream& out, const path_ptr& f )
{
    std::visit( overloaded{
                    [ & ]( const next_node& n ) {
                        out << "(X ";
                        write( out, n.operand );
                        out << ')';
                    },
                    [ & ]( const until_node& n ) {
                        out << "(U ";
                        write( out, n.hold );
                        out << ' ';
                        write( out, n.goal );
                        out << ')';
                    },
                },
                f->node );
}

void write( std::ostream& out, const state_ptr& f )
{
    std::visit( overloaded{
                    [ & ]( const true_node& ) { out << "true"; },
                    [ & ]( const atom_node& n ) { out << "(ap " << n.name << ')'; },
                    [ & ]( const not_node& n ) {
                        out << "(not ";
                        write( out, n.operand );
                        out << ')';
                    },
                    [ & ]( const and_node& n ) {
                        out << "(and ";
                        write( out, n.left );
                        out << ' ';
                        write( out, n.right );
                        out << ')';
                    },
                    [ & ]( const prob_node& n ) {
                        out << ( n.cmp == comparison::gt ? "(P> " : "(P= " ) << n.bound.to_string() << ' ';
                        write( out, n.path );
                        out << ')';
                    },
                },
                f->node );
}

} // namespace

std::string prob_bound::to_string() const
{
    if ( !is_template() )
        return offset.to_string();
    std::string out = "?t";
    if ( slope != rational{ 1 } )
        out += "*" + slope.to_string();
    if ( !offset.is_zero() )
        out += "+" + offset.to_string();
    return out;
}

state_ptr truth()
{
    static const auto t = std::make_shared< const state_formula >( state_formula{ true_node{} } );
    return t;
}

state_ptr atom( std::string name ) { return std::make_shared< const state_formula >( state_formula{ atom_node{ std::move( name ) } } ); }
state_ptr negation( state_ptr f ) { return std::make_shared< const state_formula >( state_formula{ not_node{ std::move( f ) } } ); }

state_ptr conjunction( state_ptr a, state_ptr b )
{
    return std::make_shared< const state_formula >( state_formula{ and_node{ std::move( a ), std::move( b ) } } );
}

state_ptr conjunction( const std::vector< state_ptr >& fs )
{
    if ( fs.empty() )
        throw error( error_kind::invalid_argument, "empty conjunction" );
    state_ptr result = fs.back();
    for ( auto it = fs.rbegin() + 1; it != fs.rend(); ++it )
        result = conjunction( *it, result );
    return result;
}

state_ptr disjunction( const std::vector< state_ptr >& fs )
{
    std::vector< state_ptr > negated;
    negated.reserve( fs.size() );
    for ( const auto& f : fs )
        negated.push_back( negation( f ) );
    return negation( conjunction( negated ) );
}

state_ptr prob( comparison cmp, prob_bound bound, path_ptr path )
{
    if ( !bound.is_template() )
        check_range( bound.offset, 0 );
    return std::make_shared< const state_formula >( state_formula{ prob_node{ cmp, std::move( bound ), std::move( path ) } } );
}

path_ptr next( state_ptr f ) { return std::make_shared< const path_formula >( path_formula{ next_node{ std::move( f ) } } ); }

path_ptr until( state_ptr hold, state_ptr goal )
{
    return std::make_shared< const path_formula >( path_formula{ until_node{ std::move( hold ), std::move( goal ) } } );
}

std::string to_string( const state_ptr& f )
{
    std::ostringstream out;
    write( out, f );
    return out.str();
}

std::string to_string( const path_ptr& f )
{
    std::ostringstream out;
    write( out, f );
    return out.str();
}

state_ptr parse_formula( std::string_view text )
{
    parser p{ text };
    auto f = p.state();
    p.finish();
    return f;
}

path_ptr parse_path_formula( std::string_view text )
{
    parser p{ text };
    auto f = p.path();
    p.finish();
    return f;
}

bool has_placeholder( const path_ptr& f )
{
    return std::visit( overloaded{
                           []( const next_node& n ) { return has_placeholder( n.operand ); },
                           []( const until_node& n ) { return has_placeholder( n.hold ) || has_placeholder( n.goal ); },
                       },
                       f->node );
}

bool has_placeholder( const state_ptr& f )
{
    return std::visit( overloaded{
                           []( const true_node& ) { return false; },
                           []( const atom_node& ) { return false; },
                           []( const not_node& n ) { return has_placeholder( n.operand ); },
                           []( const and_node& n ) { return has_placeholder( n.left ) || has_placeholder( n.right ); },
                           []( const prob_node& n ) { return n.bound.is_template() || has_placeholder( n.path ); },
                       },
                       f->node );
}

namespace
{

path_ptr bind_path( const path_ptr& f, const rational& t )
{
    return std::visit( overloaded{
                           [ & ]( const next_node& n ) { return next( bind_placeholder( n.operand, t ) ); },
                           [ & ]( const until_node& n ) {
                               return until( bind_placeholder( n.hold, t ), bind_placeholder( n.goal, t ) );
                           },
                       },
                       f->node );
}

} // namespace

state_ptr bind_placeholder( const state_ptr& f, const rational& t )
{
    if ( !has_placeholder( f ) )
        return f;
    return std::visit( overloaded{
                           [ & ]( const true_node& ) { return f; },
                           [ & ]( const atom_node& ) { return f; },
                           [ & ]( const not_node& n ) { return negation( bind_placeholder( n.operand, t ) ); },
                           [ & ]( const and_node& n ) {
                               return conjunction( bind_placeholder( n.left, t ), bind_placeholder( n.right, t ) );
                           },
                           [ & ]( const prob_node& n ) {
                               auto b = n.bound.is_template() ? prob_bound::constant( n.bound.at( t ) ) : n.bound;
                               return prob( n.cmp, std::move( b ), bind_path( n.path, t ) );
                           },
                       },
                       f->node );
}

const prob_node* outermost_prob( const state_ptr& f )
{
    return std::visit( overloaded{
                           []( const true_node& ) -> const prob_node* { return nullptr; },
                           []( const atom_node& ) -> const prob_node* { return nullptr; },
                           []( const not_node& n ) -> const prob_node* { return outermost_prob( n.operand ); },
                           []( const and_node& n ) -> const prob_node* {
                               if ( const auto* p = outermost_prob( n.left ) )
                                   return p;
                               return outermost_prob( n.right );
                           },
                           []( const prob_node& n ) -> const prob_node* { return &n; },
                       },
                       f->node );
}

} // namespace ppda::pctl
