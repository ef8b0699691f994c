#include "ppda/lemmas.hpp"

#include "ppda/error.hpp"
#include "ppda/oracle.hpp"
#include "ppda/pctl_eval.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

namespace ppda::lemmas
{

namespace
{

using clock = std::chrono::steady_clock;

std::string describe( const pcp_instance& inst, const index_word& w )
{
    std::string out = "{";
    for ( const auto& [ u, v ] : inst.pairs )
        out += "(" + ( u.empty() ? std::string{ "-" } : u ) + "," + ( v.empty() ? std::string{ "-" } : v ) + ")";
    return out + "} word " + w.to_string();
}

void fail( lemma_result& r, const std::string& detail )
{
    if ( r.passed )
        r.detail = detail;
    r.passed = false;
}

struct timer
{
    lemma_result& result;
    clock::time_point start = clock::now();

    ~timer() { result.seconds = std::chrono::duration< double >( clock::now() - start ).count(); }
};

std::string stacked_word( const pcp_instance& inst, const index_word& w, bool upper )
{
    const auto padded = reduction::pad( inst );
    std::string word;
    for ( const auto j : w.indices )
        word += upper ? padded.pairs[ j - 1 ].first : padded.pairs[ j - 1 ].second;
    word = reduction::erase_pad( word );
    std::reverse( word.begin(), word.end() );
    return word + "Z'";
}

pctl::eval_budget budget_for( const configuration& c )
{
    const std::size_t scale = c.stack.size() + 8;
    return { 64 * scale, 4 * scale };
}

pctl::prob_interval until_of( const reduction::reduction_artifact& art, const pctl::path_ptr& phi,
                              const configuration& at )
{
    const auto gen = art.chain( at );
    const auto& u = std::get< pctl::until_node >( phi->node );
    return pctl::prob_until( gen, at.state(), u.hold, u.goal, budget_for( at ) );
}

} // namespace

std::string seeded_rng::ab_word( std::size_t min_length, std::size_t max_length )
{
    const auto length = min_length + below( max_length - min_length + 1 );
    std::string w;
    for ( std::size_t i = 0; i < length; ++i )
        w += below( 2 ) == 0 ? 'A' : 'B';
    return w;
}

std::vector< index_word > all_index_words( std::size_t n, std::size_t max_k )
{
    std::vector< index_word > out;
    oracle::for_each_index_word( n, max_k, [ & ]( const index_word& w ) {
        out.push_back( w );
        return false;
    } );
    return out;
}

std::vector< pcp_instance > all_instances( std::size_t max_n, std::size_t max_len )
{
    std::vector< std::string > words{ "" };
    for ( std::size_t len = 1; len <= max_len; ++len )
        for ( std::size_t bits = 0; bits < ( std::size_t{ 1 } << len ); ++bits )
        {
            std::string w;
            for ( std::size_t i = 0; i < len; ++i )
                w += ( bits >> ( len - 1 - i ) ) & 1U ? 'B' : 'A';
            words.push_back( std::move( w ) );
        }

    std::vector< std::pair< std::string, std::string > > pairs;
    for ( const auto& u : words )
        for ( const auto& v : words )
            pairs.emplace_back( u, v );

    std::vector< pcp_instance > out;
    for ( std::size_t n = 1; n <= max_n; ++n )
    {
        std::vector< std::size_t > pick( n, 0 );
        while ( true )
        {
            pcp_instance inst;
            bool any_letter = false;
            for ( const auto p : pick )
            {
                inst.pairs.push_back( pairs[ p ] );
                any_letter = any_letter || !pairs[ p ].first.empty() || !pairs[ p ].second.empty();
            }
            if ( any_letter )
                out.push_back( std::move( inst ) );

            std::size_t pos = n;
            while ( pos > 0 && pick[ pos - 1 ] + 1 == pairs.size() )
                pick[ --pos ] = 0;
            if ( pos == 0 )
                break;
            ++pick[ pos - 1 ];
        }
    }
    return out;
}

std::vector< pcp_instance > random_instances( seeded_rng& rng, std::size_t count, std::size_t max_n,
                                              std::size_t max_len )
{
    std::vector< pcp_instance > out;
    while ( out.size() < count )
    {
        pcp_instance inst;
        const auto n = 1 + rng.below( max_n );
        for ( std::size_t i = 0; i < n; ++i )
        {
            auto u = rng.ab_word( 0, max_len );
            auto v = rng.ab_word( 0, max_len );
            inst.pairs.emplace_back( std::move( u ), std::move( v ) );
        }
        const bool degenerate = std::all_of( inst.pairs.begin(), inst.pairs.end(),
                                             []( const auto& p ) { return p.first.empty() && p.second.empty(); } );
        if ( !degenerate )
            out.push_back( std::move( inst ) );
    }
    return out;
}

lemma_result check_complement( std::uint64_t seed, std::size_t count, std::size_t max_len )
{
    lemma_result r{ "complement identity" };
    timer t{ r };
    seeded_rng rng{ seed };
    for ( std::size_t i = 0; i < count; ++i, ++r.cases )
    {
        const auto w = rng.ab_word( 1, max_len ) + "Z'";
        if ( reduction::rho( w ) + reduction::rho_bar( w ) != rational{ 1 } )
            fail( r, "rho + rho_bar != 1 for " + w );
    }
    return r;
}

lemma_result check_uniqueness( std::uint64_t seed, std::size_t count, std::size_t max_len )
{
    lemma_result r{ "uniqueness" };
    timer t{ r };
    seeded_rng rng{ seed ^ 0x9e3779b97f4a7c15ULL };
    while ( r.cases < count )
    {
        const auto w = rng.ab_word( 1, max_len );
        const auto w_bar = rng.ab_word( 1, max_len );
        if ( w == w_bar )
            continue;
        ++r.cases;
        if ( reduction::rho( w + "Z'" ) + reduction::rho_bar( w_bar + "Z'" ) == rational{ 1 } )
            fail( r, "rho(" + w + "Z') + rho_bar(" + w_bar + "Z') = 1" );
    }
    return r;
}

lemma_result check_chain_agreement( const std::vector< pcp_instance >& instances, std::size_t max_k )
{
    lemma_result r{ "chain/formula agreement" };
    timer t{ r };
    for ( const auto& inst : instances )
    {
        const auto art = reduction::compile( inst );
        for ( const auto& w : all_index_words( inst.size(), max_k ) )
        {
            ++r.cases;
            const auto p1 = until_of( art, art.phi1, reduction::verify_config( inst, w, "F" ) );
            const auto p2 = until_of( art, art.phi2, reduction::verify_config( inst, w, "S" ) );
            const auto expect1 = reduction::rho( stacked_word( inst, w, true ) );
            const auto expect2 = reduction::rho_bar( stacked_word( inst, w, false ) );
            if ( !p1.is_point() || p1.lo != expect1 || !p2.is_point() || p2.lo != expect2 )
                fail( r, describe( inst, w ) + ": P(phi1 at F)=" + p1.to_string() + " rho=" + expect1.to_string() +
                             ", P(phi2 at S)=" + p2.to_string() + " rho_bar=" + expect2.to_string() );
        }
    }
    return r;
}

lemma_result check_halving( const std::vector< pcp_instance >& instances, std::size_t max_k )
{
    lemma_result r{ "halving at N" };
    timer t{ r };
    const rational two{ 2 };
    for ( const auto& inst : instances )
    {
        const auto art = reduction::compile( inst );
        for ( const auto& w : all_index_words( inst.size(), max_k ) )
        {
            ++r.cases;
            const auto at_n = reduction::verify_config( inst, w, "N" );
            const auto n1 = until_of( art, art.phi1, at_n );
            const auto n2 = until_of( art, art.phi2, at_n );
            const auto f1 = until_of( art, art.phi1, reduction::verify_config( inst, w, "F" ) );
            const auto s2 = until_of( art, art.phi2, reduction::verify_config( inst, w, "S" ) );
            if ( n1.lo * two != f1.lo || n2.lo * two != s2.lo || !n1.is_point() || !n2.is_point() )
                fail( r, describe( inst, w ) );
        }
    }
    return r;
}

lemma_result check_biconditional( const std::vector< pcp_instance >& instances, std::size_t max_k,
                                  reduction::compile_options options )
{
    lemma_result r{ "biconditional" };
    switch ( options.variant )
    {
    case reduction::variant_kind::standard: break;
    case reduction::variant_kind::n_chain: r.name += " (N-chain variant)"; break;
    case reduction::variant_kind::cf_simple: r.name += " (C->F|S variant)"; break;
    }
    timer t{ r };
    for ( const auto& inst : instances )
    {
        const auto art = reduction::compile( inst, options );
        for ( const auto& w : all_index_words( inst.size(), max_k ) )
        {
            ++r.cases;
            const auto report = reduction::certify( art, inst, w );
            const bool solution = reduction::check_solution( inst, w );
            const bool sum_is_half = report.p_phi1_at_N + report.p_phi2_at_N == rational{ 1, 2 };
            if ( report.formula_holds != solution || report.is_solution != solution || sum_is_half != solution )
                fail( r, describe( inst, w ) + ": formula_holds=" + ( report.formula_holds ? "true" : "false" ) +
                             " solution=" + ( solution ? "true" : "false" ) );
        }
    }
    return r;
}

namespace
{

bool c_headed( const chain_state& s )
{
    const auto c = configuration::decode( s.encoding );
    return !c.stack.empty() && c.top() == "C";
}

} // namespace

lemma_result check_reachability( const pcp_instance& inst, std::size_t max_rounds )
{
    lemma_result r{ "reachability" };
    timer t{ r };
    const auto art = reduction::compile( inst );
    const auto start = configuration{ std::nullopt, { "Z" } };
    const auto gen = art.chain( start );
    const std::size_t depth = max_rounds * ( art.m() + 1 ) + 1;

    // duplicate pairs make several index words stack the same configuration;
    // each word still owns exactly one rule path
    std::map< chain_state, std::size_t > words_per_config;
    std::set< chain_state > expected;
    for ( const auto& w : all_index_words( inst.size(), max_rounds ) )
    {
        const auto c = reduction::guess_config( inst, w ).state();
        ++words_per_config[ c ];
        expected.insert( c );
    }

    const auto reach = explore( gen, start.state(), { std::size_t{ 1 } << 22, depth } );
    std::set< chain_state > found;
    for ( const auto* part : { &reach.settled, &reach.frontier } )
        for ( const auto& s : *part )
            if ( c_headed( s ) )
                found.insert( s );
    r.cases = expected.size();
    if ( found != expected )
        fail( r, "reachable C-configurations: " + std::to_string( found.size() ) + ", expected " +
                     std::to_string( expected.size() ) );

    // count paths layer by layer through the guessing phase only
    std::map< chain_state, std::size_t > layer{ { start.state(), 1 } };
    std::map< chain_state, std::size_t > paths_to_c;
    for ( std::size_t d = 0; d < depth && !layer.empty(); ++d )
    {
        std::map< chain_state, std::size_t > next;
        for ( const auto& [ s, count ] : layer )
        {
            if ( c_headed( s ) )
                continue;
            for ( const auto& tr : gen.successors( s ) )
            {
                next[ tr.target ] += count;
                if ( c_headed( tr.target ) )
                    paths_to_c[ tr.target ] += count;
            }
        }
        layer = std::move( next );
    }
    if ( paths_to_c != words_per_config )
        fail( r, "rule paths into C-configurations do not match index words one to one" );

    for ( const auto& w : all_index_words( inst.size(), max_rounds ) )
    {
        const auto path = reduction::guess_path( inst, w );
        if ( path.states.back() != reduction::guess_config( inst, w ).state() ||
             path_probability( gen, path ) != reduction::guess_path_probability( inst, w ) )
            fail( r, "witness path mismatch for word " + w.to_string() );
    }
    return r;
}

lemma_result check_oracle_equivalence( std::uint64_t seed, std::size_t count, std::size_t max_pairs )
{
    lemma_result r{ "oracle equivalence" };
    timer t{ r };
    seeded_rng rng{ seed ^ 0x5bd1e995ULL };
    const auto art = reduction::compile( pcp_instance{ { { "A", "A" } } } );
    constexpr char letters[] = { 'A', 'B', reduction::pad_letter };
    const char* heads[] = { "N", "F", "S", nullptr };

    for ( std::size_t i = 0; i < count; ++i, ++r.cases )
    {
        configuration c;
        if ( const char* head = heads[ rng.below( 4 ) ] )
            c.stack.emplace_back( head );
        const auto pairs = rng.below( max_pairs + 1 );
        for ( std::size_t p = 0; p < pairs; ++p )
            c.stack.push_back( reduction::pair_symbol( letters[ rng.below( 3 ) ], letters[ rng.below( 3 ) ] ) );
        c.stack.emplace_back( "Z'" );

        const bool first = rng.below( 2 ) == 0;
        const auto& phi = first ? art.phi1 : art.phi2;
        const auto interval = until_of( art, phi, c );

        const auto gen = art.chain( c );
        const auto preds = first ? oracle::phi1_predicates( gen ) : oracle::phi2_predicates( gen );
        const auto exact = oracle::enumerate_until_probability( gen, c.state(), preds.hold, preds.goal,
                                                                4 * ( c.stack.size() + 2 ) );
        if ( !interval.is_point() || interval.lo != exact )
            fail( r, c.encode() + ( first ? " phi1: " : " phi2: " ) + interval.to_string() + " vs " + exact.to_string() );
    }
    return r;
}

std::vector< lemma_result > run_suite( const suite_options& options )
{
    seeded_rng rng{ options.seed };
    auto instances = random_instances( rng, options.instances, options.max_n, options.max_m );
    const pcp_instance p1{ { { "AB", "A" }, { "B", "BB" } } };
    instances.insert( instances.begin(), p1 );

    std::vector< lemma_result > results;
    results.push_back( check_complement( options.seed, 1000, 20 ) );
    results.push_back( check_uniqueness( options.seed, 1000, 10 ) );
    results.push_back( check_chain_agreement( instances, options.max_k ) );
    results.push_back( check_halving( instances, options.max_k ) );
    results.push_back( check_biconditional( instances, options.max_k ) );
    results.push_back( check_biconditional( instances, options.max_k, { reduction::variant_kind::n_chain, 2 } ) );
    results.push_back( check_biconditional( instances, options.max_k, { reduction::variant_kind::cf_simple, 1 } ) );

    lemma_result reach{ "reachability" };
    const auto rounds = std::min< std::size_t >( options.max_k, 3 );
    for ( const auto& inst : instances )
    {
        auto one = check_reachability( inst, rounds );
        reach.cases += one.cases;
        reach.seconds += one.seconds;
        if ( !one.passed )
            fail( reach, one.detail );
    }
    results.push_back( std::move( reach ) );
    results.push_back( check_oracle_equivalence( options.seed, 100, 8 ) );
    return results;
}

} // namespace ppda::lemmas
