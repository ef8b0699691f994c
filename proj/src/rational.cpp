#include "ppda/rational.hpp"

#include "ppda/error.hpp"

#include <cctype>

namespace ppda
{

namespace
{

bool is_integer_literal( std::string_view text, bool allow_sign )
{
    if ( !text.empty() && allow_sign && ( text.front() == '-' || text.front() == '+' ) )
        text.remove_prefix( 1 );
    if ( text.empty() )
        return false;
    for ( const char c : text )
        if ( !std::isdigit( static_cast< unsigned char >( c ) ) )
            return false;
    return true;
}

mpz_class to_mpz( std::string_view text )
{
    if ( !text.empty() && text.front() == '+' )
        text.remove_prefix( 1 );
    return mpz_class{ std::string{ text }, 10 };
}

} // namespace

rational::rational( std::int64_t numerator ) : _value{ 0 }
{
    // mpq_class has no int64 constructor on every platform.
    _value = mpq_class{ mpz_class{ std::to_string( numerator ), 10 } };
}

rational::rational( std::int64_t numerator, std::int64_t denominator ) : _value{ 0 }
{
    if ( denominator == 0 )
        throw error( error_kind::invalid_argument, "zero denominator" );
    _value = mpq_class{ mpz_class{ std::to_string( numerator ), 10 },
                        mpz_class{ std::to_string( denominator ), 10 } };
    _value.canonicalize();
}

rational rational::parse( std::string_view text )
{
    const auto slash = text.find( '/' );
    if ( slash == std::string_view::npos )
    {
        if ( !is_integer_literal( text, true ) )
            throw syntax_error( 0, "not a rational: '" + std::string{ text } + "'" );
        return rational{ mpq_class{ to_mpz( text ) } };
    }

    const auto num = text.substr( 0, slash );
    const auto den = text.substr( slash + 1 );
    if ( !is_integer_literal( num, true ) || !is_integer_literal( den, false ) )
        throw syntax_error( 0, "not a rational: '" + std::string{ text } + "'" );
    mpz_class d = to_mpz( den );
    if ( d == 0 )
        throw syntax_error( slash + 1, "zero denominator in '" + std::string{ text } + "'" );
    return rational{ mpq_class{ to_mpz( num ), d } };
}

rational rational::dyadic( unsigned exponent )
{
    mpz_class den = 1;
    mpz_mul_2exp( den.get_mpz_t(), den.get_mpz_t(), exponent );
    return rational{ mpq_class{ mpz_class{ 1 }, den } };
}

std::string rational::to_string() const
{
    if ( _value.get_den() == 1 )
        return _value.get_num().get_str();
    return _value.get_num().get_str() + "/" + _value.get_den().get_str();
}

rational& rational::operator/=( const rational& other )
{
    if ( other.is_zero() )
        throw error( error_kind::invalid_argument, "division by zero" );
    _value /= other._value;
    return *this;
}

} // namespace ppda
