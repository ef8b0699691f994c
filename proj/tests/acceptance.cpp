#include "ppda/lemmas.hpp"
#include "ppda/oracle.hpp"
#include "ppda/pctl_eval.hpp"
#include "ppda/reduction.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

using namespace ppda;
using reduction::index_word;
using reduction::pcp_instance;

namespace
{

constexpr std::uint64_t seed = 1;
const pcp_instance p1{ { { "AB", "A" }, { "B", "BB" } } };

struct outcome
{
    bool passed = true;
    std::string detail;

    void require( bool condition, const std::string& what )
    {
        if ( !condition && passed )
        {
            passed = false;
            detail = what;
        }
    }
    void absorb( const lemmas::lemma_result& r )
    {
        require( r.passed, r.name + ": " + r.detail );
        std::ostringstream out;
        out << ( detail.empty() ? "" : detail + "; " ) << r.name << " " << r.cases << " cases";
        if ( passed )
            detail = out.str();
    }
};

bool run( int number, const std::string& title, double limit_seconds, const std::function< outcome() >& body )
{
    const auto start = std::chrono::steady_clock::now();
    outcome o;
    try
    {
        o = body();
    }
    catch ( const std::exception& e )
    {
        o.passed = false;
        o.detail = std::string{ "exception: " } + e.what();
    }
    const std::chrono::duration< double > elapsed = std::chrono::steady_clock::now() - start;
    const bool in_time = elapsed.count() < limit_seconds;
    const bool ok = o.passed && in_time;
    std::cout << ( ok ? "PASS" : "FAIL" ) << "  criterion " << number << ": " << title << " [" << std::fixed
              << std::setprecision( 2 ) << elapsed.count() << " s, limit " << std::setprecision( 0 ) << limit_seconds
              << " s]" << ( in_time ? "" : " TOO SLOW" ) << ( o.detail.empty() ? "" : " - " + o.detail ) << std::endl;
    return ok;
}

outcome worked_instance()
{
    outcome o;
    const auto art = reduction::compile( p1 );
    const auto good = reduction::certify( art, p1, { { 1, 2 } } );
    o.require( good.is_solution, "[1,2] should be a solution" );
    o.require( good.t == rational( 3, 16 ), "t = " + good.t.to_string() );
    o.require( good.p_phi1_at_N == rational( 3, 32 ), "P(phi1) = " + good.p_phi1_at_N.to_string() );
    o.require( good.p_phi2_at_N == rational( 13, 32 ), "P(phi2) = " + good.p_phi2_at_N.to_string() );
    o.require( good.formula_holds, "formula should hold for [1,2]" );

    const auto bad = reduction::certify( art, p1, { { 1, 1 } } );
    o.require( !bad.formula_holds, "formula should fail for [1,1]" );
    o.require( bad.p_phi1_at_N + bad.p_phi2_at_N != rational( 1, 2 ), "[1,1] probabilities sum to 1/2" );

    // the same numbers from plain path enumeration, halved by N -> F | S
    for ( const auto& [ w, report ] : { std::pair{ index_word{ { 1, 2 } }, good }, std::pair{ index_word{ { 1, 1 } }, bad } } )
    {
        const auto f = reduction::verify_config( p1, w, "F" );
        const auto s = reduction::verify_config( p1, w, "S" );
        const auto gf = art.chain( f );
        const auto gs = art.chain( s );
        const auto a = oracle::phi1_predicates( gf );
        const auto b = oracle::phi2_predicates( gs );
        const auto e1 = oracle::enumerate_until_probability( gf, f.state(), a.hold, a.goal, 200 );
        const auto e2 = oracle::enumerate_until_probability( gs, s.state(), b.hold, b.goal, 200 );
        o.require( report.p_phi1_at_N * rational{ 2 } == e1, "enumeration disagrees on phi1 for " + w.to_string() );
        o.require( report.p_phi2_at_N * rational{ 2 } == e2, "enumeration disagrees on phi2 for " + w.to_string() );
    }
    if ( o.passed )
        o.detail = "t=3/16, 3/32, 13/32; [1,1] rejected";
    return o;
}

outcome reachability()
{
    outcome o;
    o.absorb( lemmas::check_reachability( p1, 2 ) );
    const index_word w{ { 1, 2 } };
    const auto gen = reduction::compile( p1 ).chain( configuration::decode( "Z" ) );
    const auto p = path_probability( gen, reduction::guess_path( p1, w ) );
    o.require( p == rational( 1, 18 ), "witness path probability " + p.to_string() );
    o.require( reduction::guess_path_probability( p1, w ) == rational( 1, 18 ), "closed form is not 1/18" );
    if ( o.passed )
        o.detail += "; witness path 1/18";
    return o;
}

outcome end_to_end( const std::filesystem::path& corpus_file )
{
    outcome o;
    const auto c = oracle::load_corpus( corpus_file );
    o.require( c.entries.size() == 8, "corpus has " + std::to_string( c.entries.size() ) + " entries" );
    const auto report = oracle::corpus_check( c, 4 );
    o.require( report.all_agree(), "search disagreement:\n" + report.to_text( false ) );

    std::size_t solvable = 0;
    for ( const auto& entry : c.entries )
    {
        const auto w = oracle::brute_force_pcp( entry.instance, 4 );
        if ( !w )
            continue;
        ++solvable;
        const auto art = reduction::compile( entry.instance );
        const auto cert = reduction::certify( art, entry.instance, *w );
        const auto gen = art.chain( configuration::decode( "Z" ) );
        // enough states to finish every guess round up to the witness
        const auto rounds = w->indices.size() * ( art.m() + 1 ) + 1;
        const auto guessed = explore( gen, gen.initial(), { std::size_t{ 1 } << 20, rounds } );
        const std::size_t states = guessed.settled.size() + guessed.frontier.size() + 64;
        const pctl::eval_budget budget{ states, 4 * ( w->indices.size() * art.m() + 8 ) };
        const auto verdict = pctl::eval_state( gen, gen.initial(),
                                               reduction::instantiate_top_formula( art, cert.t ), budget );
        o.require( verdict == pctl::three_valued::is_true,
                   entry.name + ": top formula is " + pctl::to_string( verdict ) + " at t=" + cert.t.to_string() );
    }

    const auto never = reduction::compile( { { { "A", "B" } } } );
    const auto gen = never.chain( configuration::decode( "Z" ) );
    std::size_t tried = 0;
    for ( const auto& t : { rational( 1, 2 ), rational( 1, 4 ), rational( 3, 4 ), rational( 3, 16 ) } )
        for ( const std::size_t budget : { 8, 64, 512, 4096 } )
        {
            ++tried;
            const auto verdict = pctl::eval_state(
                gen, gen.initial(), reduction::instantiate_top_formula( never, t ), { budget, budget } );
            o.require( verdict == pctl::three_valued::unknown,
                       "{(A,B)} top formula is " + std::string{ pctl::to_string( verdict ) } + " at t=" +
                           t.to_string() + ", budget " + std::to_string( budget ) );
        }
    if ( o.passed )
        o.detail = std::to_string( c.entries.size() ) + " instances agree, " + std::to_string( solvable ) +
                   " certified True, {(A,B)} Unknown on " + std::to_string( tried ) + " budgets";
    return o;
}

} // namespace

int main( int argc, char** argv )
{
    std::filesystem::path corpus = std::filesystem::path{ PPDA_SOURCE_DIR } / "data" / "corpus" / "corpus.txt";
    if ( argc > 1 )
        corpus = argv[ 1 ];

    const auto sweep = lemmas::all_instances( 2, 2 );
    bool all = true;

    all &= run( 1, "complement identity", 1, [] {
        outcome o;
        o.absorb( lemmas::check_complement( seed, 1000, 20 ) );
        return o;
    } );
    all &= run( 2, "uniqueness", 1, [] {
        outcome o;
        o.absorb( lemmas::check_uniqueness( seed, 1000, 10 ) );
        return o;
    } );
    all &= run( 3, "worked instance P1", 1, worked_instance );
    all &= run( 4, "biconditional sweep n<=2, |u|,|v|<=2, k<=4", 120, [ & ] {
        outcome o;
        o.absorb( lemmas::check_biconditional( sweep, 4 ) );
        return o;
    } );
    all &= run( 5, "reachable C-configurations of P1, k<=2", 10, reachability );
    all &= run( 6, "oracle equivalence, 100 stacks, l<=8", 30, [] {
        outcome o;
        o.absorb( lemmas::check_oracle_equivalence( seed, 100, 8 ) );
        return o;
    } );
    all &= run( 7, "corpus search and top formula", 120, [ & ] { return end_to_end( corpus ); } );
    all &= run( 8, "variant formulas reproduce the sweep", 120, [ & ] {
        outcome o;
        o.absorb( lemmas::check_biconditional( sweep, 4, { reduction::variant_kind::cf_simple, 1 } ) );
        o.absorb( lemmas::check_biconditional( sweep, 4, { reduction::variant_kind::n_chain, 2 } ) );
        return o;
    } );

    std::cout << ( all ? "all criteria passed" : "some criteria failed" ) << std::endl;
    return all ? 0 : 1;
}
