#include "ppda/error.hpp"
#include "ppda/lemmas.hpp"
#include "ppda/oracle.hpp"
#include "ppda/pctl_eval.hpp"
#include "ppda/pushdown.hpp"
#include "ppda/reduction.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ppda;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

std::string read_file( const fs::path& path )
{
    std::ifstream in{ path };
    if ( !in )
        throw error( error_kind::invalid_argument, "cannot read " + path.string() );
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file( const fs::path& path, const std::string& text )
{
    std::ofstream out{ path };
    if ( !out )
        throw error( error_kind::invalid_argument, "cannot write " + path.string() );
    out << text;
}

std::string show( const std::optional< reduction::index_word >& w )
{
    return w ? w->to_string() : std::string{ "none" };
}

reduction::compile_options parse_variant( const std::vector< std::string >& words )
{
    reduction::compile_options options;
    if ( words.empty() || ( words.size() == 1 && words[ 0 ] == "standard" ) )
        return options;
    if ( words.size() == 1 && words[ 0 ] == "cf-simple" )
    {
        options.variant = reduction::variant_kind::cf_simple;
        return options;
    }
    if ( words[ 0 ] == "n-chain" )
    {
        options.variant = reduction::variant_kind::n_chain;
        if ( words.size() == 2 )
        {
            std::size_t used = 0;
            unsigned long k = 0;
            try
            {
                k = std::stoul( words[ 1 ], &used );
            }
            catch ( const std::exception& )
            {
                used = 0;
            }
            if ( used != words[ 1 ].size() || k == 0 )
                throw error( error_kind::invalid_argument, "n-chain length must be a positive integer" );
            options.chain_length = k;
        }
        return options;
    }
    throw error( error_kind::invalid_argument, "unknown variant; expected 'n-chain K' or 'cf-simple'" );
}

std::size_t parse_count( const std::string& text, const char* what )
{
    std::size_t used = 0;
    unsigned long long value = 0;
    try
    {
        value = std::stoull( text, &used );
    }
    catch ( const std::exception& )
    {
        used = 0;
    }
    if ( text.empty() || used != text.size() || value == 0 || text[ 0 ] == '-' )
        throw error( error_kind::invalid_argument, std::string{ what } + " must be a positive integer" );
    return static_cast< std::size_t >( value );
}

lemmas::suite_options parse_sizes( const std::string& text, lemmas::suite_options options )
{
    std::vector< std::string > parts;
    std::stringstream in{ text };
    for ( std::string part; std::getline( in, part, ',' ); )
        parts.push_back( part );
    if ( parts.size() != 3 || text.back() == ',' )
        throw error( error_kind::invalid_argument, "sizes must look like \"n,m,k\"" );
    options.max_n = parse_count( parts[ 0 ], "n" );
    options.max_m = parse_count( parts[ 1 ], "m" );
    options.max_k = parse_count( parts[ 2 ], "k" );
    return options;
}

int run_compile( const std::string& instance_file, const std::vector< std::string >& variant, const fs::path& out )
{
    const auto inst = reduction::parse_instance( read_file( instance_file ) );
    const auto art = reduction::compile( inst, parse_variant( variant ) );
    fs::create_directories( out );

    write_file( out / "model.bpa", serialize_model( model{ art.model } ) );
    write_file( out / "phi1.pctl", pctl::to_string( art.phi1 ) + "\n" );
    write_file( out / "phi2.pctl", pctl::to_string( art.phi2 ) + "\n" );
    write_file( out / "top.pctl", pctl::to_string( art.top_formula ) + "\n" );
    std::string gamma;
    for ( const auto& s : art.gamma )
        gamma += s + "\n";
    write_file( out / "gamma.txt", gamma );

    std::cout << "wrote " << out.string() << " (|Gamma| = " << art.gamma.size() << ", " << art.model.rules().size()
              << " rules)\n";
    return exit_ok;
}

int run_certify( const std::string& instance_file, const std::string& word )
{
    const auto inst = reduction::parse_instance( read_file( instance_file ) );
    const auto w = reduction::index_word::parse( word );
    reduction::check_indices( inst, w );
    const auto report = reduction::certify( inst, w );
    std::cout << report.to_text();
    return report.formula_holds ? exit_ok : exit_negative;
}

int run_search( const std::string& instance_file, std::size_t max_k, const std::string& engine )
{
    if ( max_k == 0 )
        throw error( error_kind::invalid_argument, "--max-k must be at least 1" );
    const auto inst = reduction::parse_instance( read_file( instance_file ) );

    auto report = [ & ]( const char* label, const std::optional< reduction::index_word >& w ) {
        if ( w )
            std::cout << label << "witness " << w->to_string() << '\n';
        else
            std::cout << label << "none up to " << max_k << '\n';
    };

    if ( engine == "brute" )
    {
        report( "", oracle::brute_force_pcp( inst, max_k ) );
        return exit_ok;
    }
    if ( engine == "reduction" )
    {
        report( "", oracle::search_via_reduction( inst, max_k ) );
        return exit_ok;
    }

    const auto brute = oracle::brute_force_pcp( inst, max_k );
    const auto via = oracle::search_via_reduction( inst, max_k );
    if ( brute != via )
    {
        std::cout << "DISAGREEMENT\n  brute:     " << show( brute ) << "\n  reduction: " << show( via ) << '\n';
        return exit_negative;
    }
    report( "", brute );
    std::cout << "engines agree\n";
    return exit_ok;
}

int run_solve( const std::string& instance_file, std::size_t max_k )
{
    if ( max_k == 0 )
        throw error( error_kind::invalid_argument, "--max-k must be at least 1" );
    const auto inst = reduction::parse_instance( read_file( instance_file ) );
    const auto w = oracle::brute_force_pcp( inst, max_k );
    if ( w )
        std::cout << "witness " << w->to_string() << '\n';
    else
        std::cout << "none up to " << max_k << '\n';
    return exit_ok;
}

int run_eval( const std::string& model_file, const std::string& config, const std::string& formula_file,
              const std::optional< std::string >& t_text, std::size_t max_states, std::size_t max_depth )
{
    const auto m = parse_model( read_file( model_file ) );
    if ( const auto report = validate_model( m ); !report.ok() )
    {
        std::string message = "model does not validate";
        for ( const auto& v : report.violations )
            message += "\n  " + v;
        throw error( error_kind::invalid_model, message );
    }
    auto formula = pctl::parse_formula( read_file( formula_file ) );
    if ( pctl::has_placeholder( formula ) )
    {
        if ( !t_text )
            throw error( error_kind::unbound_placeholder, "formula contains ?t; pass --t" );
        const auto t = rational::parse( *t_text );
        if ( !( rational{} < t && t < rational{ 1 } ) )
            throw error( error_kind::t_out_of_range, "t must satisfy 0 < t < 1" );
        formula = pctl::bind_placeholder( formula, t );
    }

    const auto start = configuration::decode( config );
    auto shared_model = std::make_shared< const model >( m );
    auto nu = std::make_shared< const assignment >( simple_assignment::symbol_propositions( m ) );
    const auto gen = induced_chain( shared_model, nu, start );

    pctl::evaluator ev{ gen, { max_states, max_depth } };
    const auto verdict = ev.eval_state( gen.initial(), formula );
    std::cout << pctl::to_string( verdict ) << '\n';
    if ( const auto* p = pctl::outermost_prob( formula ) )
        std::cout << "interval " << ev.prob_path( gen.initial(), p->path ).to_string() << '\n';
    return exit_ok;
}

int run_lemmas( std::uint64_t seed, const std::optional< std::string >& sizes )
{
    lemmas::suite_options options;
    options.seed = seed;
    if ( const char* env = std::getenv( "PPDA_SEED" ); env != nullptr && *env != '\0' )
        options.seed = parse_count( env, "PPDA_SEED" );
    if ( sizes )
        options = parse_sizes( *sizes, options );

    std::cout << "seed " << options.seed << ", sizes " << options.max_n << ',' << options.max_m << ','
              << options.max_k << '\n';
    bool all = true;
    for ( const auto& r : lemmas::run_suite( options ) )
    {
        std::cout << ( r.passed ? "PASS " : "FAIL " ) << r.name << " (" << r.cases << " cases)";
        if ( !r.passed )
            std::cout << ": " << r.detail;
        std::cout << '\n';
        all = all && r.passed;
    }
    return all ? exit_ok : exit_negative;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Exact pBPA/PCTL toolkit and PCP reduction" };
    app.require_subcommand( 1, 1 );

    std::string instance_file;
    std::string word;
    std::string engine = "both";
    std::string model_file;
    std::string config;
    std::string formula_file;
    std::optional< std::string > t_text;
    std::optional< std::string > sizes;
    std::vector< std::string > variant;
    std::string out_dir;
    std::size_t max_k = 0;
    std::size_t max_states = 0;
    std::size_t max_depth = 0;
    std::uint64_t seed = 1;

    auto* compile = app.add_subcommand( "compile", "Compile a PCP instance into a pBPA and PCTL formulas" );
    compile->add_option( "--instance", instance_file, "Instance file" )->required();
    compile->add_option( "--variant", variant, "n-chain K | cf-simple" )->expected( 1, 2 );
    compile->add_option( "--out", out_dir, "Output directory" )->required();

    auto* certify = app.add_subcommand( "certify", "Check one index word through the reduction" );
    certify->add_option( "--instance", instance_file, "Instance file" )->required();
    certify->add_option( "--word", word, "Index word, e.g. 1,2" )->required();

    auto* search = app.add_subcommand( "search", "Search index words up to a length" );
    search->add_option( "--instance", instance_file, "Instance file" )->required();
    search->add_option( "--max-k", max_k, "Longest index word" )->required();
    search->add_option( "--engine", engine, "reduction | brute | both" )
        ->check( CLI::IsMember( { "reduction", "brute", "both" } ) );

    auto* solve = app.add_subcommand( "solve", "Brute-force PCP search" );
    solve->add_option( "--instance", instance_file, "Instance file" )->required();
    solve->add_option( "--max-k", max_k, "Longest index word" )->required();

    auto* eval = app.add_subcommand( "eval", "Evaluate a PCTL formula on a model configuration" );
    eval->add_option( "--model", model_file, "Model file" )->required();
    eval->add_option( "--config", config, "Start configuration, top of stack first" )->required();
    eval->add_option( "--formula", formula_file, "Formula file" )->required();
    eval->add_option( "--t", t_text, "Value for ?t" );
    eval->add_option( "--max-states", max_states, "State budget" )->required();
    eval->add_option( "--max-depth", max_depth, "Depth budget" )->required();

    auto* lemma = app.add_subcommand( "lemmas", "Run the seeded property suite" );
    lemma->add_option( "--seed", seed, "Generator seed" );
    lemma->add_option( "--sizes", sizes, "n,m,k" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e );
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if ( *compile )
            return run_compile( instance_file, variant, out_dir );
        if ( *certify )
            return run_certify( instance_file, word );
        if ( *search )
            return run_search( instance_file, max_k, engine );
        if ( *solve )
            return run_solve( instance_file, max_k );
        if ( *eval )
            return run_eval( model_file, config, formula_file, t_text, max_states, max_depth );
        if ( *lemma )
            return run_lemmas( seed, sizes );
    }
    catch ( const error& e )
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch ( const std::exception& e )
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
