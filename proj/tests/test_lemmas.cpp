#include "ppda/lemmas.hpp"

#include <doctest.h>

using namespace ppda;
using namespace ppda::lemmas;

TEST_CASE( "instance generators" )
{
    // 7 words of length <= 2 over {A,B}: 7^2 - 1 one-pair and 49^2 - 1 two-pair instances
    CHECK( all_instances( 2, 2 ).size() == 48 + 2400 );
    CHECK( all_instances( 1, 1 ).size() == 8 );
    CHECK( all_index_words( 2, 3 ).size() == 2 + 4 + 8 );

    seeded_rng a{ 4 };
    seeded_rng b{ 4 };
    const auto x = random_instances( a, 10, 3, 3 );
    const auto y = random_instances( b, 10, 3, 3 );
    REQUIRE( x.size() == 10 );
    for ( std::size_t i = 0; i < x.size(); ++i )
    {
        CHECK( x[ i ].pairs == y[ i ].pairs );
        CHECK( x[ i ].size() <= 3 );
    }
}

TEST_CASE( "seeded generator is reproducible" )
{
    seeded_rng a{ 99 };
    seeded_rng b{ 99 };
    for ( int i = 0; i < 50; ++i )
    {
        const auto w = a.ab_word( 1, 20 );
        CHECK( w == b.ab_word( 1, 20 ) );
        CHECK( !w.empty() );
        CHECK( w.size() <= 20 );
        CHECK( w.find_first_not_of( "AB" ) == std::string::npos );
    }
}

TEST_CASE( "individual checks" )
{
    CHECK( check_complement( 1, 200, 20 ).passed );
    CHECK( check_uniqueness( 1, 200, 10 ).passed );

    const std::vector< pcp_instance > few{ { { { "AB", "A" }, { "B", "BB" } } }, { { { "A", "" }, { "", "A" } } } };
    for ( const auto& r : { check_chain_agreement( few, 3 ), check_halving( few, 3 ), check_biconditional( few, 3 ),
                            check_reachability( few[ 0 ], 2 ) } )
    {
        CAPTURE( r.name );
        CHECK_MESSAGE( r.passed, r.detail );
        CHECK( r.cases > 0 );
    }
}

TEST_CASE( "suite passes at small sizes" )
{
    suite_options options;
    options.max_k = 2;
    options.instances = 6;
    for ( const auto& r : run_suite( options ) )
    {
        CAPTURE( r.name );
        CHECK_MESSAGE( r.passed, r.detail );
    }
}
