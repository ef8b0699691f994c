#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace ppda
{

// Exact probability value. Always kept in lowest terms with a positive
// denominator; serialized as "p/q", or "p" when q = 1.
class rational
{
    mpq_class _value;

    explicit rational( mpq_class value ) : _value{ std::move( value ) } { _value.canonicalize(); }

public:
    rational() : _value{ 0 } {}
    rational( std::int64_t numerator ); // NOLINT (implicit from integers is intended)
    rational( std::int64_t numerator, std::int64_t denominator );

    // Accepts `integer` or `integer/positive-integer`; throws syntax_error.
    [[nodiscard]] static rational parse( std::string_view text );

    // 2^-exponent.
    [[nodiscard]] static rational dyadic( unsigned exponent );

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::string numerator() const { return _value.get_num().get_str(); }
    [[nodiscard]] std::string denominator() const { return _value.get_den().get_str(); }

    [[nodiscard]] bool is_zero() const { return sgn( _value ) == 0; }
    [[nodiscard]] int sign() const { return sgn( _value ); }

    rational& operator+=( const rational& other ) { _value += other._value; return *this; }
    rational& operator-=( const rational& other ) { _value -= other._value; return *this; }
    rational& operator*=( const rational& other ) { _value *= other._value; return *this; }
    rational& operator/=( const rational& other );

    friend rational operator+( rational a, const rational& b ) { return a += b; }
    friend rational operator-( rational a, const rational& b ) { return a -= b; }
    friend rational operator*( rational a, const rational& b ) { return a *= b; }
    friend rational operator/( rational a, const rational& b ) { return a /= b; }
    friend rational operator-( const rational& a ) { return rational{ mpq_class{ -a._value } }; }

    friend bool operator==( const rational& a, const rational& b ) { return cmp( a._value, b._value ) == 0; }
    friend std::strong_ordering operator<=>( const rational& a, const rational& b )
    {
        const int c = cmp( a._value, b._value );
        return c < 0 ? std::strong_ordering::less
                     : ( c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal );
    }

    friend std::ostream& operator<<( std::ostream& out, const rational& r ) { return out << r.to_string(); }
};

} // namespace ppda
