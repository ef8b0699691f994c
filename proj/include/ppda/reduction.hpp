#pragma once

#include "ppda/markov_chain.hpp"
#include "ppda/pctl.hpp"
#include "ppda/pushdown.hpp"
#include "ppda/rational.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppda::reduction
{

// The padding letter written between or after letters so that every word of a
// padded instance has the same length. Printed as `_` in symbol names.
constexpr char pad_letter = '_';

// Word pairs over {A, B}. At least one word must be non-empty.
struct pcp_instance
{
    std::vector< std::pair< std::string, std::string > > pairs;

    [[nodiscard]] std::size_t size() const { return pairs.size(); }
};

// Throws degenerate_instance or malformed_word.
void validate_instance( const pcp_instance& inst );

// One pair per line, `u v`, `-` for the empty word, `#` comments.
[[nodiscard]] pcp_instance parse_instance( std::string_view text );
[[nodiscard]] std::string serialize_instance( const pcp_instance& inst );

struct padded_instance
{
    std::vector< std::pair< std::string, std::string > > pairs;
    std::size_t m = 0;
};

// Right-pads every word to the maximal word length m.
[[nodiscard]] padded_instance pad( const pcp_instance& inst );
[[nodiscard]] std::string erase_pad( std::string_view word );

// Non-empty sequence of 1-based pair indices.
struct index_word
{
    std::vector< std::size_t > indices;

    [[nodiscard]] std::string to_string() const; // "1,2"
    [[nodiscard]] static index_word parse( std::string_view text );

    friend auto operator<=>( const index_word&, const index_word& ) = default;
};

// Throws index_out_of_range for an empty word or an index outside 1..n.
void check_indices( const pcp_instance& inst, const index_word& w );

// u_{j1}...u_{jk} == v_{j1}...v_{jk}.
[[nodiscard]] bool check_solution( const pcp_instance& inst, const index_word& w );

[[nodiscard]] std::string pair_symbol( char x, char y );    // P(x,y)
[[nodiscard]] std::string checked_symbol( char x, char y ); // X(x,y)
[[nodiscard]] std::string guess_symbol( std::size_t i, std::size_t j ); // G(i,j)
[[nodiscard]] std::string chain_symbol( std::size_t i );    // N(i)

enum class variant_kind
{
    standard,  // C -> N, goal C & P=1(X [lemma])
    n_chain,   // C -> N(1) -> ... -> N(K) -> N, goal C & P=1(true U P=1(X [lemma]))
    cf_simple, // C -> F | S, goal C & [lemma]
};

struct compile_options
{
    variant_kind variant = variant_kind::standard;
    std::size_t chain_length = 1; // K for n_chain
};

struct reduction_artifact
{
    compile_options options;
    padded_instance padded;
    bpa model;
    std::vector< symbol > gamma;
    simple_assignment nu;
    pctl::path_ptr phi1;
    pctl::path_ptr phi2;
    // P=t/2(phi1) & P=(1-t)/2(phi2), t symbolic.
    pctl::state_ptr lemma;
    // The goal of the top-level until, evaluated at C-headed configurations.
    pctl::state_ptr at_check;
    // P>0(true U at_check), t symbolic.
    pctl::state_ptr top_formula;
    // Frozen copies of model and nu shared by every generated chain.
    std::shared_ptr< const ppda::model > shared_model;
    std::shared_ptr< const assignment > shared_nu;

    [[nodiscard]] std::size_t n() const { return padded.pairs.size(); }
    [[nodiscard]] std::size_t m() const { return padded.m; }
    [[nodiscard]] chain_generator chain( const configuration& start ) const;
};

[[nodiscard]] reduction_artifact compile( const pcp_instance& inst, compile_options options = {} );

// Digit weights of the dyadic encoding; defined on A, B and Z'.
[[nodiscard]] unsigned theta( std::string_view x );
[[nodiscard]] unsigned theta_bar( std::string_view x );

// rho(x_1...x_l Z') = sum_i theta(x_i) 2^-i + theta(Z') 2^-(l+1). The argument
// is the letters followed by the literal Z', e.g. "BBAZ'".
[[nodiscard]] rational rho( std::string_view word );
[[nodiscard]] rational rho_bar( std::string_view word );

// C (x_1,y_1) ... (x_l,y_l) Z' after guessing w; the pairs come off the stack
// in the reverse of the order they were guessed.
[[nodiscard]] configuration guess_config( const pcp_instance& inst, const index_word& w );
// Same stack with another head symbol in place of C (N, F, S, ...).
[[nodiscard]] configuration verify_config( const pcp_instance& inst, const index_word& w, const symbol& head );
// The unique rule path Z -> ... -> guess_config(inst, w).
[[nodiscard]] finite_path guess_path( const pcp_instance& inst, const index_word& w );
// (1/n) (1/(n+1))^k.
[[nodiscard]] rational guess_path_probability( const pcp_instance& inst, const index_word& w );

struct certify_report
{
    index_word word;
    bool is_solution = false;
    rational t;
    rational p_phi1_at_N;
    rational p_phi2_at_N;
    bool formula_holds = false;

    [[nodiscard]] std::string to_text() const;
};

// Exact P(phi1), P(phi2) at N alpha Z', t = 2 P(phi1), and the verdict of the
// artifact's check formula at C alpha Z' under that t.
[[nodiscard]] certify_report certify( const reduction_artifact& art, const pcp_instance& inst, const index_word& w );
[[nodiscard]] certify_report certify( const pcp_instance& inst, const index_word& w );

// Throws t_out_of_range unless 0 < t < 1.
[[nodiscard]] pctl::state_ptr instantiate_top_formula( const reduction_artifact& art, const rational& t );
[[nodiscard]] pctl::state_ptr instantiate_check_formula( const reduction_artifact& art, const rational& t );

} // namespace ppda::reduction
