#include "ppda/oracle.hpp"

#include "ppda/error.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ppda::oracle
{

namespace
{

bool has_checked_label( const label_set& labels, std::string_view first, std::string_view second )
{
    // X(x,y) with x in `first` and y in `second`; an empty filter matches any letter
    for ( const auto& l : labels )
    {
        if ( l.size() != 6 || l.compare( 0, 2, "X(" ) != 0 || l[ 3 ] != ',' || l[ 5 ] != ')' )
            continue;
        const bool x_ok = first.empty() || first.find( l[ 2 ] ) != std::string_view::npos;
        const bool y_ok = second.empty() || second.find( l[ 4 ] ) != std::string_view::npos;
        if ( x_ok && y_ok )
            return true;
    }
    return false;
}

rational walk( const chain_generator& gen, const chain_state& s, const state_predicate& hold,
               const state_predicate& goal, std::size_t depth, std::size_t max_depth )
{
    if ( goal( s ) )
        return rational{ 1 };
    if ( !hold( s ) )
        return rational{};

    const auto succ = gen.successors( s );
    if ( succ.size() == 1 && succ.front().target == s )
        return rational{};
    if ( depth >= max_depth )
        throw error( error_kind::unresolved_path, "path through '" + s.encoding + "' undecided after " +
                                                      std::to_string( max_depth ) + " steps" );

    rational total;
    for ( const auto& t : succ )
        total += t.probability * walk( gen, t.target, hold, goal, depth + 1, max_depth );
    return total;
}

} // namespace

void for_each_index_word( std::size_t n, std::size_t max_k, const std::function< bool( const index_word& ) >& visit )
{
    for ( std::size_t k = 1; k <= max_k; ++k )
    {
        index_word w{ std::vector< std::size_t >( k, 1 ) };
        while ( true )
        {
            if ( visit( w ) )
                return;
            std::size_t pos = k;
            while ( pos > 0 && w.indices[ pos - 1 ] == n )
                w.indices[ --pos ] = 1;
            if ( pos == 0 )
                break;
            ++w.indices[ pos - 1 ];
        }
    }
}

std::optional< index_word > brute_force_pcp( const pcp_instance& inst, std::size_t max_k )
{
    reduction::validate_instance( inst );
    std::optional< index_word > found;
    for_each_index_word( inst.size(), max_k, [ & ]( const index_word& w ) {
        std::string u;
        std::string v;
        for ( const auto j : w.indices )
        {
            u += inst.pairs[ j - 1 ].first;
            v += inst.pairs[ j - 1 ].second;
        }
        if ( u == v )
            found = w;
        return found.has_value();
    } );
    return found;
}

until_predicates phi1_predicates( const chain_generator& gen )
{
    return {
        [ &gen ]( const chain_state& s ) {
            const auto l = gen.labels( s );
            return l.count( "S" ) == 0 && !has_checked_label( l, "AB", "" );
        },
        [ &gen ]( const chain_state& s ) { return has_checked_label( gen.labels( s ), "A", "" ); },
    };
}

until_predicates phi2_predicates( const chain_generator& gen )
{
    return {
        [ &gen ]( const chain_state& s ) {
            const auto l = gen.labels( s );
            return l.count( "F" ) == 0 && !has_checked_label( l, "", "AB" );
        },
        [ &gen ]( const chain_state& s ) { return has_checked_label( gen.labels( s ), "", "B" ); },
    };
}

rational enumerate_until_probability( const chain_generator& gen, const chain_state& s, const state_predicate& hold,
                                      const state_predicate& goal, std::size_t max_depth )
{
    return walk( gen, s, hold, goal, 0, max_depth );
}

std::optional< index_word > search_via_reduction( const pcp_instance& inst, std::size_t max_k,
                                                  reduction::compile_options options )
{
    const auto art = reduction::compile( inst, options );
    std::optional< index_word > found;
    for_each_index_word( inst.size(), max_k, [ & ]( const index_word& w ) {
        if ( reduction::certify( art, inst, w ).formula_holds )
            found = w;
        return found.has_value();
    } );
    return found;
}

corpus parse_corpus( std::string_view text, const std::filesystem::path& base )
{
    corpus c;
    std::istringstream in{ std::string{ text } };
    std::size_t line_no = 0;
    for ( std::string line; std::getline( in, line ); )
    {
        ++line_no;
        if ( const auto hash = line.find( '#' ); hash != std::string::npos )
            line.erase( hash );
        std::istringstream fields{ line };
        std::vector< std::string > words;
        for ( std::string w; fields >> w; )
            words.push_back( std::move( w ) );
        if ( words.empty() )
            continue;

        const auto where = "corpus line " + std::to_string( line_no ) + ": ";
        if ( words.size() != 3 || ( words[ 1 ] != "solvable" && words[ 1 ] != "unsolvable" ) )
            throw error( error_kind::corpus_error, where + "expected 'PATH solvable WORD' or 'PATH unsolvable K'" );

        const auto path = base / words[ 0 ];
        std::ifstream file{ path };
        if ( !file )
            throw error( error_kind::corpus_error, where + "cannot read " + path.string() );
        std::stringstream contents;
        contents << file.rdbuf();

        corpus_entry entry;
        entry.name = words[ 0 ];
        try
        {
            entry.instance = reduction::parse_instance( contents.str() );
            if ( words[ 1 ] == "solvable" )
            {
                auto w = index_word::parse( words[ 2 ] );
                if ( !reduction::check_solution( entry.instance, w ) )
                    throw error( error_kind::corpus_error, "witness " + w.to_string() + " is not a solution" );
                entry.expected.witness = std::move( w );
            }
            else
            {
                const auto k = std::stoul( words[ 2 ] );
                if ( k == 0 )
                    throw error( error_kind::corpus_error, "unsolvable bound must be positive" );
                entry.expected.unsolvable_up_to = k;
            }
        }
        catch ( const std::exception& e )
        {
            throw error( error_kind::corpus_error, where + e.what() );
        }
        c.entries.push_back( std::move( entry ) );
    }
    return c;
}

corpus load_corpus( const std::filesystem::path& file )
{
    std::ifstream in{ file };
    if ( !in )
        throw error( error_kind::corpus_error, "cannot read " + file.string() );
    std::stringstream contents;
    contents << in.rdbuf();
    return parse_corpus( contents.str(), file.parent_path() );
}

bool corpus_report::all_agree() const
{
    return std::all_of( rows.begin(), rows.end(),
                        []( const corpus_row& r ) { return r.agree && r.matches_expected && r.invariants_hold; } );
}

std::string corpus_report::to_text( bool with_timing ) const
{
    std::ostringstream out;
    auto show = []( const std::optional< index_word >& w ) { return w ? w->to_string() : std::string{ "none" }; };
    for ( const auto& r : rows )
    {
        out << std::left << std::setw( 24 ) << r.name << " brute=" << std::setw( 10 ) << show( r.brute )
            << " reduction=" << std::setw( 10 ) << show( r.via_reduction ) << ' '
            << ( r.agree && r.matches_expected && r.invariants_hold ? "ok" : "MISMATCH" );
        if ( !r.note.empty() )
            out << " (" << r.note << ')';
        if ( with_timing )
            out << ' ' << std::fixed << std::setprecision( 1 ) << r.millis << "ms";
        out << '\n';
    }
    return out.str();
}

corpus_report corpus_check( const corpus& c, std::size_t max_k )
{
    if ( max_k == 0 )
        throw error( error_kind::invalid_argument, "max_k must be positive" );

    corpus_report report;
    for ( const auto& entry : c.entries )
    {
        const auto start = std::chrono::steady_clock::now();
        corpus_row row;
        row.name = entry.name;
        row.brute = brute_force_pcp( entry.instance, max_k );
        row.via_reduction = search_via_reduction( entry.instance, max_k );
        row.agree = row.brute == row.via_reduction;

        if ( entry.expected.witness )
        {
            const auto& w = *entry.expected.witness;
            row.matches_expected = w.indices.size() > max_k ||
                                   ( row.brute && row.brute->indices.size() <= w.indices.size() );
        }
        else
        {
            const auto bound = std::min( max_k, entry.expected.unsolvable_up_to );
            row.matches_expected = !row.brute || row.brute->indices.size() > bound;
        }

        const auto art = reduction::compile( entry.instance );
        row.invariants_hold = validate_model( model{ art.model } ).ok();
        if ( !row.invariants_hold )
            row.note = "compiled model invalid";
        if ( row.via_reduction && row.invariants_hold )
        {
            // certified probabilities must match plain enumeration from F and S
            const auto cert = reduction::certify( art, entry.instance, *row.via_reduction );
            const auto at_f = reduction::verify_config( entry.instance, *row.via_reduction, "F" );
            const auto at_s = reduction::verify_config( entry.instance, *row.via_reduction, "S" );
            const auto gen = art.chain( at_f );
            const auto p1 = phi1_predicates( gen );
            const auto p2 = phi2_predicates( gen );
            const std::size_t depth = 4 * ( at_f.stack.size() + 4 );
            const auto from_f = enumerate_until_probability( gen, at_f.state(), p1.hold, p1.goal, depth );
            const auto from_s = enumerate_until_probability( gen, at_s.state(), p2.hold, p2.goal, depth );
            row.invariants_hold = cert.p_phi1_at_N * rational{ 2 } == from_f && cert.p_phi2_at_N * rational{ 2 } == from_s;
            if ( !row.invariants_hold )
                row.note = "certified probabilities disagree with enumeration";
        }
        row.millis = std::chrono::duration< double, std::milli >( std::chrono::steady_clock::now() - start ).count();
        report.rows.push_back( std::move( row ) );
    }
    return report;
}

} // namespace ppda::oracle
