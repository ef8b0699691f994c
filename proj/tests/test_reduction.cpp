#include "ppda/error.hpp"
#include "ppda/pctl_eval.hpp"
#include "ppda/reduction.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace ppda;
using namespace ppda::reduction;

namespace
{

const pcp_instance p1{ { { "AB", "A" }, { "B", "BB" } } };

configuration cfg( std::string_view text ) { return configuration::decode( text ); }

error_kind kind_of( const std::function< void() >& f )
{
    try
    {
        f();
    }
    catch ( const error& e )
    {
        return e.kind();
    }
    FAIL( "expected an error" );
    return error_kind::invalid_argument;
}

// Hand-derived reading of the verification phase: walk the stored pairs top
// to bottom; each pair is checked with probability 1/2, Z' is always checked.
// For phi1 a checked A succeeds and a checked B fails, ignoring pads; phi2
// looks at the second letter with B succeeding and A failing.
rational verify_from_f_or_s( const std::vector< std::pair< char, char > >& pairs, bool first )
{
    rational result( 1, 2 ); // Z' -> X(A,B) | X(B,A)
    for ( auto it = pairs.rbegin(); it != pairs.rend(); ++it )
    {
        const char letter = first ? it->first : it->second;
        const char win = first ? 'A' : 'B';
        if ( letter == pad_letter )
            continue;
        result = rational( 1, 2 ) * ( letter == win ? rational{ 1 } : rational{} ) + rational( 1, 2 ) * result;
    }
    return result;
}

std::vector< std::pair< char, char > > stored_pairs( const pcp_instance& inst, const index_word& w )
{
    const auto padded = pad( inst );
    std::string u;
    std::string v;
    for ( const auto j : w.indices )
    {
        u += padded.pairs[ j - 1 ].first;
        v += padded.pairs[ j - 1 ].second;
    }
    std::vector< std::pair< char, char > > top_first;
    for ( std::size_t i = u.size(); i-- > 0; )
        top_first.emplace_back( u[ i ], v[ i ] );
    return top_first;
}

bool concatenations_match( const pcp_instance& inst, const index_word& w )
{
    std::string u;
    std::string v;
    for ( const auto j : w.indices )
    {
        u += inst.pairs[ j - 1 ].first;
        v += inst.pairs[ j - 1 ].second;
    }
    return u == v;
}

} // namespace

TEST_CASE( "pad and erase_pad" )
{
    const auto one = pad( { { { "AB", "A" } } } );
    CHECK( one.m == 2 );
    CHECK( one.pairs.at( 0 ) == std::pair< std::string, std::string >{ "AB", "A_" } );
    CHECK( pad( { { { "A", "A" } } } ).m == 1 );
    const auto both = pad( p1 );
    CHECK( both.pairs.at( 0 ) == std::pair< std::string, std::string >{ "AB", "A_" } );
    CHECK( both.pairs.at( 1 ) == std::pair< std::string, std::string >{ "B_", "BB" } );
    for ( const auto& [ u, v ] : both.pairs )
    {
        CHECK( u.size() == 2 );
        CHECK( v.size() == 2 );
    }
    CHECK( erase_pad( "A_B" ) == "AB" );
    CHECK( erase_pad( "__" ) == "" );
    CHECK( erase_pad( "B_" ) == "B" );
    CHECK( kind_of( [] { (void)pad( { { { "", "" } } } ); } ) == error_kind::degenerate_instance );
    CHECK( kind_of( [] { (void)pad( { {} } ); } ) == error_kind::degenerate_instance );
    CHECK( kind_of( [] { validate_instance( { { { "AC", "A" } } } ); } ) == error_kind::malformed_word );
}

TEST_CASE( "instance text" )
{
    const auto inst = parse_instance( "# P1\nAB A\nB BB\n\n- A # empty u\n" );
    REQUIRE( inst.size() == 3 );
    CHECK( inst.pairs[ 2 ] == std::pair< std::string, std::string >{ "", "A" } );
    CHECK( parse_instance( serialize_instance( inst ) ).pairs == inst.pairs );
    CHECK_THROWS_AS( (void)parse_instance( "AB\n" ), syntax_error );
    CHECK_THROWS_AS( (void)parse_instance( "AB A B\n" ), syntax_error );
    CHECK_THROWS_AS( (void)parse_instance( "" ), error );
    CHECK_THROWS_AS( (void)parse_instance( "- -\n" ), error );
    CHECK_THROWS_AS( (void)parse_instance( "AX A\n" ), error );
}

TEST_CASE( "index words and check_solution" )
{
    CHECK( index_word::parse( "1,2" ).indices == std::vector< std::size_t >{ 1, 2 } );
    CHECK( index_word{ { 3, 1 } }.to_string() == "3,1" );
    for ( const char* bad : { "", "1,", ",1", "a", "1;2", "-1" } )
    {
        CAPTURE( bad );
        CHECK_THROWS_AS( (void)index_word::parse( bad ), error );
    }

    CHECK( check_solution( p1, { { 1, 2 } } ) );
    CHECK_FALSE( check_solution( p1, { { 1, 1 } } ) );
    CHECK_FALSE( check_solution( { { { "A", "B" } } }, { { 1 } } ) );
    CHECK( check_solution( { { { "A", "A" } } }, { { 1 } } ) );
    CHECK( kind_of( [] { (void)check_solution( p1, { { 3 } } ); } ) == error_kind::index_out_of_range );
    CHECK( kind_of( [] { (void)check_solution( p1, { { 0 } } ); } ) == error_kind::index_out_of_range );
    CHECK( kind_of( [] { (void)check_solution( p1, { {} } ); } ) == error_kind::index_out_of_range );
}

TEST_CASE( "compile emits the guess and verify rules" )
{
    const auto art = compile( p1 );
    CHECK( art.n() == 2 );
    CHECK( art.m() == 2 );
    // 6 specials, 9 pair and 9 checked symbols, G(i,j) for j = 1..m+1
    CHECK( art.gamma.size() == 6 + 9 + 9 + 2 * 3 );
    std::set< symbol > unique( art.gamma.begin(), art.gamma.end() );
    CHECK( unique.size() == art.gamma.size() );
    CHECK( unique == art.model.alphabet() );

    auto rules = [ & ]( const symbol& head ) { return art.model.rules_for( head ); };
    REQUIRE( rules( "C" ).size() == 1 );
    CHECK( rules( "C" )[ 0 ]->body == std::vector< symbol >{ "N" } );
    CHECK( rules( "C" )[ 0 ]->probability == rational{ 1 } );
    for ( std::size_t i = 1; i <= 2; ++i )
    {
        const auto last = rules( guess_symbol( i, 3 ) );
        CHECK( last.size() == 3 );
        for ( const auto* r : last )
            CHECK( r->probability == rational( 1, 3 ) );
    }
    CHECK( rules( "G(1,1)" )[ 0 ]->body == std::vector< symbol >{ "G(1,2)", "P(A,A)" } );
    CHECK( rules( "G(1,2)" )[ 0 ]->body == std::vector< symbol >{ "G(1,3)", "P(B,_)" } );
    CHECK( rules( "Z'" ).size() == 2 );
    CHECK( rules( "P(_,B)" ).size() == 2 );
    CHECK( rules( "X(A,_)" )[ 0 ]->body.empty() );
    CHECK( art.model.rules().size() == 2 + 2 * 2 + 2 * 3 + 1 + 2 + 2 + 18 + 2 + 9 );

    const auto phi1 = pctl::to_string( art.phi1 );
    const auto phi2 = pctl::to_string( art.phi2 );
    CHECK( phi1.find( "(ap F)" ) == std::string::npos );
    CHECK( phi2.find( "(ap S)" ) == std::string::npos );
    CHECK( phi1.find( "(ap S)" ) != std::string::npos );
    CHECK( phi2.find( "(ap F)" ) != std::string::npos );

    CHECK( art.nu.labels_of( { std::nullopt, "C" } ) == label_set{ "C" } );
    CHECK( kind_of( [] { (void)compile( { { { "", "" } } } ); } ) == error_kind::degenerate_instance );
}

TEST_CASE( "compile variants" )
{
    const auto chained = compile( p1, { variant_kind::n_chain, 3 } );
    CHECK( chained.model.rules_for( "C" )[ 0 ]->body == std::vector< symbol >{ "N(1)" } );
    CHECK( chained.model.rules_for( "N(3)" )[ 0 ]->body == std::vector< symbol >{ "N" } );
    CHECK( std::count( chained.gamma.begin(), chained.gamma.end(), "N(2)" ) == 1 );

    const auto simple = compile( p1, { variant_kind::cf_simple, 1 } );
    const auto c_rules = simple.model.rules_for( "C" );
    REQUIRE( c_rules.size() == 2 );
    CHECK( c_rules[ 0 ]->probability == rational( 1, 2 ) );
    const auto top = pctl::to_string( instantiate_top_formula( simple, rational( 3, 16 ) ) );
    CHECK( top.find( "(X " ) == std::string::npos );
    CHECK( top.rfind( "(P> 0 (U true (and (ap C) (and (P= 3/32 ", 0 ) == 0 );
}

TEST_CASE( "theta and rho" )
{
    CHECK( theta( "Z'" ) == 1 );
    CHECK( theta_bar( "Z'" ) == 1 );
    CHECK( theta( "A" ) == 1 );
    CHECK( theta( "B" ) == 0 );
    CHECK( theta( "A" ) + theta_bar( "A" ) == 1 );
    CHECK( theta( "B" ) + theta_bar( "B" ) == 1 );
    CHECK( kind_of( [] { (void)theta( "C" ); } ) == error_kind::domain_error );

    CHECK( rho( "AZ'" ) == rational( 3, 4 ) );
    CHECK( rho_bar( "AZ'" ) == rational( 1, 4 ) );
    CHECK( rho( "BBAZ'" ) == rational( 3, 16 ) );
    CHECK( rho_bar( "BBAZ'" ) == rational( 13, 16 ) );
    CHECK( rho( "Z'" ) == rational( 1, 2 ) );
    CHECK( kind_of( [] { (void)rho( "AB" ); } ) == error_kind::malformed_word );
    CHECK( kind_of( [] { (void)rho( "ACZ'" ) ; } ) == error_kind::malformed_word );
}

TEST_CASE( "guess configurations and their paths" )
{
    CHECK( guess_config( p1, { { 1, 2 } } ).encode() == "C P(_,B) P(B,B) P(B,_) P(A,A) Z'" );
    CHECK( guess_config( { { { "A", "A" } } }, { { 1 } } ).encode() == "C P(A,A) Z'" );
    CHECK( verify_config( p1, { { 1 } }, "N" ).encode() == "N P(B,_) P(A,A) Z'" );
    CHECK( kind_of( [] { (void)guess_config( p1, { { 3 } } ); } ) == error_kind::index_out_of_range );

    CHECK( guess_path_probability( p1, { { 1, 2 } } ) == rational( 1, 18 ) );
    CHECK( guess_path_probability( { { { "A", "A" } } }, { { 1 } } ) == rational( 1, 2 ) );

    const auto art = compile( p1 );
    const auto gen = art.chain( cfg( "Z" ) );
    for ( const auto& w : { index_word{ { 1 } }, index_word{ { 1, 2 } }, index_word{ { 2, 2, 1 } } } )
    {
        const auto path = guess_path( p1, w );
        CHECK( path.states.front() == cfg( "Z" ).state() );
        CHECK( path.states.back() == guess_config( p1, w ).state() );
        CHECK( path_probability( gen, path ) == guess_path_probability( p1, w ) );
    }
}

TEST_CASE( "verification probabilities against the hand oracle" )
{
    const auto art = compile( p1 );
    const index_word w{ { 1, 2 } };
    const auto pairs = stored_pairs( p1, w );
    CHECK( verify_from_f_or_s( pairs, true ) == rational( 3, 16 ) );
    CHECK( verify_from_f_or_s( pairs, false ) == rational( 13, 16 ) );

    const pctl::eval_budget budget{ 10000, 200 };
    const auto f = verify_config( p1, w, "F" );
    const auto s = verify_config( p1, w, "S" );
    const auto& u1 = std::get< pctl::until_node >( art.phi1->node );
    const auto& u2 = std::get< pctl::until_node >( art.phi2->node );
    const auto at_f = pctl::prob_until( art.chain( f ), f.state(), u1.hold, u1.goal, budget );
    const auto at_s = pctl::prob_until( art.chain( s ), s.state(), u2.hold, u2.goal, budget );
    CHECK( at_f.lo == rational( 3, 16 ) );
    CHECK( at_f.hi == rational( 3, 16 ) );
    CHECK( at_s.lo == rational( 13, 16 ) );
    CHECK( at_s.hi == rational( 13, 16 ) );

    const auto n = verify_config( p1, w, "N" );
    const auto gen = art.chain( n );
    CHECK( explore( gen, n.state(), { 10000, 100 } ).frontier.empty() );
    const auto holds = pctl::prob( pctl::comparison::eq, pctl::prob_bound::constant( rational( 3, 32 ) ), art.phi1 );
    CHECK( pctl::eval_state( gen, n.state(), holds, budget ) == pctl::three_valued::is_true );

    const auto c = guess_config( p1, w );
    const auto lemma = pctl::bind_placeholder( art.lemma, rational( 3, 16 ) );
    const auto next = pctl::prob_next( art.chain( c ), c.state(), lemma, budget );
    CHECK( next.lo == rational{ 1 } );
    CHECK( next.hi == rational{ 1 } );
}

TEST_CASE( "certify" )
{
    const auto good = certify( p1, { { 1, 2 } } );
    CHECK( good.is_solution );
    CHECK( good.t == rational( 3, 16 ) );
    CHECK( good.p_phi1_at_N == rational( 3, 32 ) );
    CHECK( good.p_phi2_at_N == rational( 13, 32 ) );
    CHECK( good.formula_holds );
    CHECK( good.to_text() ==
           "word=1,2\nis_solution=true\nt=3/16\np_phi1_at_N=3/32\np_phi2_at_N=13/32\nformula_holds=true\n" );

    const auto bad = certify( p1, { { 1, 1 } } );
    CHECK_FALSE( bad.is_solution );
    CHECK_FALSE( bad.formula_holds );
    CHECK( bad.p_phi1_at_N + bad.p_phi2_at_N != rational( 1, 2 ) );

    const pcp_instance unit{ { { "A", "A" } } };
    const auto one = certify( unit, { { 1 } } );
    CHECK( one.is_solution );
    CHECK( one.formula_holds );
    CHECK( one.t == rational( 3, 4 ) );
    CHECK( one.p_phi1_at_N + one.p_phi2_at_N == rational( 1, 2 ) );

    CHECK( kind_of( [] { (void)certify( p1, { { 0 } } ); } ) == error_kind::index_out_of_range );
}

TEST_CASE( "certify agrees with the hand oracle on many words" )
{
    const std::vector< pcp_instance > instances{
        p1,
        { { { "A", "AAB" }, { "AB", "B" }, { "B", "A" } } },
        { { { "", "AB" }, { "BA", "" } } },
        { { { "ABB", "B" }, { "B", "ABB" } } },
    };
    for ( const auto& inst : instances )
    {
        const auto art = compile( inst );
        std::vector< index_word > words{ { { 1 } } };
        for ( std::size_t k = 0; k < 40 && words.size() < 40; ++k )
            for ( std::size_t j = 1; j <= inst.size(); ++j )
            {
                auto w = words[ k ];
                w.indices.push_back( j );
                words.push_back( w );
            }
        for ( const auto& w : words )
        {
            CAPTURE( w.to_string() );
            const auto pairs = stored_pairs( inst, w );
            const auto r = certify( art, inst, w );
            CHECK( r.p_phi1_at_N == verify_from_f_or_s( pairs, true ) / rational{ 2 } );
            CHECK( r.p_phi2_at_N == verify_from_f_or_s( pairs, false ) / rational{ 2 } );
            CHECK( r.is_solution == concatenations_match( inst, w ) );
            CHECK( r.formula_holds == r.is_solution );
        }
    }
}

TEST_CASE( "top formula instantiation" )
{
    const auto art = compile( p1 );
    const auto text = pctl::to_string( instantiate_top_formula( art, rational( 3, 16 ) ) );
    CHECK( text.find( "(P= 3/32 (U" ) != std::string::npos );
    CHECK( text.find( "(P= 13/32 (U" ) != std::string::npos );
    CHECK( text.rfind( "(P> 0 (U true (and (ap C) (P= 1 (X (and ", 0 ) == 0 );
    CHECK( pctl::has_placeholder( art.top_formula ) );
    for ( const auto& t : { rational{}, rational{ 1 }, rational( 3, 2 ), rational( -1, 2 ) } )
    {
        CAPTURE( t.to_string() );
        CHECK( kind_of( [ & ] { (void)instantiate_top_formula( art, t ); } ) == error_kind::t_out_of_range );
    }

    const auto check = instantiate_check_formula( art, rational( 3, 16 ) );
    const auto c = guess_config( p1, { { 1, 2 } } );
    CHECK( pctl::eval_state( art.chain( c ), c.state(), check, { 10000, 200 } ) == pctl::three_valued::is_true );
}

TEST_CASE( "top formula at Z" )
{
    const auto art = compile( p1 );
    const auto gen = art.chain( cfg( "Z" ) );
    const auto yes = instantiate_top_formula( art, rational( 3, 16 ) );
    CHECK( pctl::eval_state( gen, gen.initial(), yes, { 5000, 60 } ) == pctl::three_valued::is_true );

    const auto never = compile( { { { "A", "B" } } } );
    const auto g = never.chain( cfg( "Z" ) );
    for ( const auto& t : { rational( 1, 2 ), rational( 3, 4 ), rational( 1, 8 ) } )
        for ( std::size_t budget : { 10, 100, 1000 } )
        {
            const auto f = instantiate_top_formula( never, t );
            CHECK( pctl::eval_state( g, g.initial(), f, { budget, budget } ) == pctl::three_valued::unknown );
        }
}

TEST_CASE( "until results do not depend on query order" )
{
    const auto art = compile( p1 );
    const index_word w{ { 1, 2, 1 } };
    const auto n = verify_config( p1, w, "N" );
    const auto& u1 = std::get< pctl::until_node >( art.phi1->node );
    const pctl::eval_budget budget{ 10000, 200 };

    // every configuration the verification phase can reach, deepest first
    const auto gen = art.chain( n );
    const auto reach = explore( gen, n.state(), { 10000, 200 } );
    std::vector< chain_state > states( reach.settled.begin(), reach.settled.end() );
    std::sort( states.begin(), states.end(), []( const chain_state& a, const chain_state& b ) {
        return a.encoding.size() < b.encoding.size();
    } );

    pctl::evaluator shared{ gen, budget };
    for ( const auto& s : states )
    {
        pctl::evaluator fresh{ gen, budget };
        const auto a = shared.prob_until( s, u1.hold, u1.goal );
        const auto b = fresh.prob_until( s, u1.hold, u1.goal );
        CAPTURE( s.encoding );
        CHECK( a.lo == b.lo );
        CHECK( a.hi == b.hi );
    }
}
