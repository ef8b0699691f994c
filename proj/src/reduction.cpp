#include "ppda/reduction.hpp"

#include "ppda/error.hpp"
#include "ppda/pctl_eval.hpp"

#include <algorithm>
#include <sstream>

namespace ppda::reduction
{

namespace
{

constexpr char letters[] = { 'A', 'B', pad_letter };

void check_letters( const std::string& word, std::string_view allowed )
{
    for ( const char c : word )
        if ( allowed.find( c ) == std::string_view::npos )
            throw error( error_kind::malformed_word, "letter '" + std::string( 1, c ) + "' in '" + word + "'" );
}

std::vector< symbol > pushed_pairs( const padded_instance& padded, const index_word& w )
{
    std::vector< symbol > pushes;
    for ( const auto j : w.indices )
    {
        const auto& [ u, v ] = padded.pairs[ j - 1 ];
        for ( std::size_t pos = 0; pos < padded.m; ++pos )
            pushes.push_back( pair_symbol( u[ pos ], v[ pos ] ) );
    }
    return pushes;
}

pctl::state_ptr neg_atom( const std::string& name ) { return pctl::negation( pctl::atom( name ) ); }

rational dyadic_sum( std::string_view word, unsigned ( *weight )( std::string_view ) )
{
    constexpr std::string_view bottom = "Z'";
    if ( word.size() < bottom.size() || word.substr( word.size() - bottom.size() ) != bottom )
        throw error( error_kind::malformed_word, "'" + std::string{ word } + "' does not end in Z'" );
    const auto body = word.substr( 0, word.size() - bottom.size() );

    rational sum;
    unsigned position = 1;
    for ( const char c : body )
    {
        if ( c != 'A' && c != 'B' )
            throw error( error_kind::malformed_word, "letter '" + std::string( 1, c ) + "' in '" + std::string{ word } + "'" );
        if ( weight( std::string_view{ &c, 1 } ) != 0 )
            sum += rational::dyadic( position );
        ++position;
    }
    if ( weight( bottom ) != 0 )
        sum += rational::dyadic( position );
    return sum;
}

} // namespace

void validate_instance( const pcp_instance& inst )
{
    if ( inst.pairs.empty() )
        throw error( error_kind::degenerate_instance, "no pairs" );
    bool any_letter = false;
    for ( const auto& [ u, v ] : inst.pairs )
    {
        check_letters( u, "AB" );
        check_letters( v, "AB" );
        any_letter = any_letter || !u.empty() || !v.empty();
    }
    if ( !any_letter )
        throw error( error_kind::degenerate_instance, "all words are empty" );
}

pcp_instance parse_instance( std::string_view text )
{
    pcp_instance inst;
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
            words.push_back( w == "-" ? std::string{} : w );
        if ( words.empty() )
            continue;
        if ( words.size() != 2 )
            throw syntax_error( line_no, "expected two words per line" );
        for ( const auto& w : words )
            if ( w.find_first_not_of( "AB" ) != std::string::npos )
                throw syntax_error( line_no, "words must be over {A,B} or '-'" );
        inst.pairs.emplace_back( std::move( words[ 0 ] ), std::move( words[ 1 ] ) );
    }
    validate_instance( inst );
    return inst;
}

std::string serialize_instance( const pcp_instance& inst )
{
    std::ostringstream out;
    for ( const auto& [ u, v ] : inst.pairs )
        out << ( u.empty() ? "-" : u ) << ' ' << ( v.empty() ? "-" : v ) << '\n';
    return out.str();
}

padded_instance pad( const pcp_instance& inst )
{
    validate_instance( inst );
    padded_instance out;
    for ( const auto& [ u, v ] : inst.pairs )
        out.m = std::max( { out.m, u.size(), v.size() } );
    for ( const auto& [ u, v ] : inst.pairs )
        out.pairs.emplace_back( u + std::string( out.m - u.size(), pad_letter ),
                                v + std::string( out.m - v.size(), pad_letter ) );
    return out;
}

std::string erase_pad( std::string_view word )
{
    std::string out;
    std::copy_if( word.begin(), word.end(), std::back_inserter( out ), []( char c ) { return c != pad_letter; } );
    return out;
}

std::string index_word::to_string() const
{
    std::string out;
    for ( const auto i : indices )
        out += ( out.empty() ? "" : "," ) + std::to_string( i );
    return out;
}

index_word index_word::parse( std::string_view text )
{
    index_word w;
    std::string item;
    std::istringstream in{ std::string{ text } };
    while ( std::getline( in, item, ',' ) )
    {
        const auto first = item.find_first_not_of( " \t" );
        const auto last = item.find_last_not_of( " \t" );
        if ( first == std::string::npos )
            throw syntax_error( 0, "empty index in '" + std::string{ text } + "'" );
        item = item.substr( first, last - first + 1 );
        if ( item.find_first_not_of( "0123456789" ) != std::string::npos || item.size() > 9 )
            throw syntax_error( 0, "bad index '" + item + "'" );
        w.indices.push_back( std::stoul( item ) );
    }
    if ( w.indices.empty() )
        throw syntax_error( 0, "empty index word" );
    if ( text.back() == ',' )
        throw syntax_error( text.size(), "trailing ',' in '" + std::string{ text } + "'" );
    return w;
}

void check_indices( const pcp_instance& inst, const index_word& w )
{
    if ( w.indices.empty() )
        throw error( error_kind::index_out_of_range, "empty index word" );
    for ( const auto j : w.indices )
        if ( j < 1 || j > inst.size() )
            throw error( error_kind::index_out_of_range,
                         "index " + std::to_string( j ) + " outside 1.." + std::to_string( inst.size() ) );
}

bool check_solution( const pcp_instance& inst, const index_word& w )
{
    check_indices( inst, w );
    std::string u;
    std::string v;
    for ( const auto j : w.indices )
    {
        u += inst.pairs[ j - 1 ].first;
        v += inst.pairs[ j - 1 ].second;
    }
    return u == v;
}

std::string pair_symbol( char x, char y ) { return std::string{ "P(" } + x + ',' + y + ')'; }
std::string checked_symbol( char x, char y ) { return std::string{ "X(" } + x + ',' + y + ')'; }
std::string guess_symbol( std::size_t i, std::size_t j ) { return "G(" + std::to_string( i ) + "," + std::to_string( j ) + ")"; }
std::string chain_symbol( std::size_t i ) { return "N(" + std::to_string( i ) + ")"; }

chain_generator reduction_artifact::chain( const configuration& start ) const
{
    if ( !shared_model || !shared_nu )
        return induced_chain( ppda::model{ model }, assignment{ nu }, start );
    return induced_chain( shared_model, shared_nu, start );
}

reduction_artifact compile( const pcp_instance& inst, compile_options options )
{
    if ( options.variant == variant_kind::n_chain && options.chain_length == 0 )
        throw error( error_kind::invalid_argument, "N-chain variant needs at least one N(i)" );

    reduction_artifact art;
    art.options = options;
    art.padded = pad( inst );
    const std::size_t n = art.n();
    const std::size_t m = art.m();

    const rational one{ 1 };
    const rational half{ 1, 2 };
    std::vector< bpa_rule > rules;

    // guessing
    for ( std::size_t i = 1; i <= n; ++i )
        rules.push_back( { "Z", { guess_symbol( i, 1 ), "Z'" }, rational{ 1, static_cast< std::int64_t >( n ) } } );
    for ( std::size_t i = 1; i <= n; ++i )
    {
        const auto& [ u, v ] = art.padded.pairs[ i - 1 ];
        for ( std::size_t j = 1; j <= m; ++j )
            rules.push_back( { guess_symbol( i, j ), { guess_symbol( i, j + 1 ), pair_symbol( u[ j - 1 ], v[ j - 1 ] ) }, one } );
        const rational branch{ 1, static_cast< std::int64_t >( n + 1 ) };
        rules.push_back( { guess_symbol( i, m + 1 ), { "C" }, branch } );
        for ( std::size_t next = 1; next <= n; ++next )
            rules.push_back( { guess_symbol( i, m + 1 ), { guess_symbol( next, 1 ) }, branch } );
    }

    // verification
    switch ( options.variant )
    {
    case variant_kind::standard:
        rules.push_back( { "C", { "N" }, one } );
        break;
    case variant_kind::n_chain:
        rules.push_back( { "C", { chain_symbol( 1 ) }, one } );
        for ( std::size_t i = 1; i <= options.chain_length; ++i )
            rules.push_back( { chain_symbol( i ), { i == options.chain_length ? std::string{ "N" } : chain_symbol( i + 1 ) }, one } );
        break;
    case variant_kind::cf_simple:
        rules.push_back( { "C", { "F" }, half } );
        rules.push_back( { "C", { "S" }, half } );
        break;
    }
    rules.push_back( { "N", { "F" }, half } );
    rules.push_back( { "N", { "S" }, half } );
    rules.push_back( { "F", {}, one } );
    rules.push_back( { "S", {}, one } );
    for ( const char x : letters )
        for ( const char y : letters )
        {
            rules.push_back( { pair_symbol( x, y ), { checked_symbol( x, y ) }, half } );
            rules.push_back( { pair_symbol( x, y ), {}, half } );
        }
    rules.push_back( { "Z'", { checked_symbol( 'A', 'B' ) }, half } );
    rules.push_back( { "Z'", { checked_symbol( 'B', 'A' ) }, half } );
    for ( const char x : letters )
        for ( const char y : letters )
            rules.push_back( { checked_symbol( x, y ), {}, one } );

    art.model = bpa{ std::move( rules ) };

    art.gamma = { "Z", "Z'", "C", "N", "F", "S" };
    for ( const char x : letters )
        for ( const char y : letters )
            art.gamma.push_back( pair_symbol( x, y ) );
    for ( const char x : letters )
        for ( const char y : letters )
            art.gamma.push_back( checked_symbol( x, y ) );
    for ( std::size_t i = 1; i <= n; ++i )
        for ( std::size_t j = 1; j <= m + 1; ++j )
            art.gamma.push_back( guess_symbol( i, j ) );
    if ( options.variant == variant_kind::n_chain )
        for ( std::size_t i = 1; i <= options.chain_length; ++i )
            art.gamma.push_back( chain_symbol( i ) );

    for ( const auto& s : art.gamma )
        art.nu.add( s, { std::nullopt, s } );

    std::vector< pctl::state_ptr > hold1{ neg_atom( "S" ) };
    std::vector< pctl::state_ptr > hold2{ neg_atom( "F" ) };
    std::vector< pctl::state_ptr > goal1;
    std::vector< pctl::state_ptr > goal2;
    for ( const char z : letters )
    {
        hold1.push_back( pctl::conjunction( neg_atom( checked_symbol( 'B', z ) ), neg_atom( checked_symbol( 'A', z ) ) ) );
        hold2.push_back( pctl::conjunction( neg_atom( checked_symbol( z, 'A' ) ), neg_atom( checked_symbol( z, 'B' ) ) ) );
        goal1.push_back( pctl::atom( checked_symbol( 'A', z ) ) );
        goal2.push_back( pctl::atom( checked_symbol( z, 'B' ) ) );
    }
    art.phi1 = pctl::until( pctl::conjunction( hold1 ), pctl::disjunction( goal1 ) );
    art.phi2 = pctl::until( pctl::conjunction( hold2 ), pctl::disjunction( goal2 ) );

    art.lemma = pctl::conjunction(
        pctl::prob( pctl::comparison::eq, pctl::prob_bound::affine( rational{}, half ), art.phi1 ),
        pctl::prob( pctl::comparison::eq, pctl::prob_bound::affine( half, -half ), art.phi2 ) );

    const auto surely = pctl::prob_bound::constant( one );
    switch ( options.variant )
    {
    case variant_kind::standard:
        art.at_check = pctl::conjunction(
            pctl::atom( "C" ), pctl::prob( pctl::comparison::eq, surely, pctl::next( art.lemma ) ) );
        break;
    case variant_kind::n_chain:
        art.at_check = pctl::conjunction(
            pctl::atom( "C" ),
            pctl::prob( pctl::comparison::eq, surely,
                        pctl::until( pctl::truth(),
                                     pctl::prob( pctl::comparison::eq, surely, pctl::next( art.lemma ) ) ) ) );
        break;
    case variant_kind::cf_simple:
        art.at_check = pctl::conjunction( pctl::atom( "C" ), art.lemma );
        break;
    }
    art.top_formula = pctl::prob( pctl::comparison::gt, pctl::prob_bound::constant( rational{} ),
                                  pctl::until( pctl::truth(), art.at_check ) );

    art.shared_model = std::make_shared< const ppda::model >( art.model );
    art.shared_nu = std::make_shared< const assignment >( art.nu );
    if ( const auto report = validate_model( *art.shared_model ); !report.ok() )
        throw error( error_kind::invalid_model, "compiled model failed validation: " + report.violations.front() );
    return art;
}

unsigned theta( std::string_view x )
{
    if ( x == "A" || x == "Z'" )
        return 1;
    if ( x == "B" )
        return 0;
    throw error( error_kind::domain_error, "theta undefined on '" + std::string{ x } + "'" );
}

unsigned theta_bar( std::string_view x )
{
    if ( x == "Z'" )
        return 1;
    return 1 - theta( x );
}

rational rho( std::string_view word ) { return dyadic_sum( word, &theta ); }
rational rho_bar( std::string_view word ) { return dyadic_sum( word, &theta_bar ); }

configuration verify_config( const pcp_instance& inst, const index_word& w, const symbol& head )
{
    check_indices( inst, w );
    const auto pushes = pushed_pairs( pad( inst ), w );
    configuration c;
    c.stack.push_back( head );
    c.stack.insert( c.stack.end(), pushes.rbegin(), pushes.rend() );
    c.stack.emplace_back( "Z'" );
    return c;
}

configuration guess_config( const pcp_instance& inst, const index_word& w ) { return verify_config( inst, w, "C" ); }

finite_path guess_path( const pcp_instance& inst, const index_word& w )
{
    check_indices( inst, w );
    const auto padded = pad( inst );

    finite_path path;
    std::vector< symbol > below{ "Z'" }; // stack under the guess symbol, top first
    auto push_state = [ & ]( const symbol& head ) {
        configuration c;
        c.stack.push_back( head );
        c.stack.insert( c.stack.end(), below.begin(), below.end() );
        path.states.push_back( c.state() );
    };

    path.states.push_back( configuration{ std::nullopt, { "Z" } }.state() );
    for ( const auto j : w.indices )
    {
        push_state( guess_symbol( j, 1 ) );
        const auto& [ u, v ] = padded.pairs[ j - 1 ];
        for ( std::size_t pos = 0; pos < padded.m; ++pos )
        {
            below.insert( below.begin(), pair_symbol( u[ pos ], v[ pos ] ) );
            push_state( guess_symbol( j, pos + 2 ) );
        }
    }
    push_state( "C" );
    return path;
}

rational guess_path_probability( const pcp_instance& inst, const index_word& w )
{
    check_indices( inst, w );
    const auto n = static_cast< std::int64_t >( inst.size() );
    rational p{ 1, n };
    for ( std::size_t i = 0; i < w.indices.size(); ++i )
        p *= rational{ 1, n + 1 };
    return p;
}

std::string certify_report::to_text() const
{
    std::ostringstream out;
    out << "word=" << word.to_string() << '\n'
        << "is_solution=" << ( is_solution ? "true" : "false" ) << '\n'
        << "t=" << t << '\n'
        << "p_phi1_at_N=" << p_phi1_at_N << '\n'
        << "p_phi2_at_N=" << p_phi2_at_N << '\n'
        << "formula_holds=" << ( formula_holds ? "true" : "false" ) << '\n';
    return out.str();
}

certify_report certify( const reduction_artifact& art, const pcp_instance& inst, const index_word& w )
{
    check_indices( inst, w );
    if ( inst.size() != art.n() )
        throw error( error_kind::invalid_argument, "artifact was compiled for a different instance" );

    certify_report report;
    report.word = w;
    report.is_solution = check_solution( inst, w );

    const auto at_n = verify_config( inst, w, "N" ).state();
    const auto at_c = guess_config( inst, w ).state();
    const auto gen = art.chain( configuration::decode( at_c.encoding ) );

    // The verification chain is acyclic, pops to Z' and resolves there, so
    // this budget covers it completely.
    const std::size_t scale = w.indices.size() * art.m() + art.options.chain_length + 8;
    const pctl::eval_budget budget{ 64 * scale, 4 * scale };
    pctl::evaluator ev{ gen, budget };

    const auto& until1 = std::get< pctl::until_node >( art.phi1->node );
    const auto& until2 = std::get< pctl::until_node >( art.phi2->node );
    const auto p1 = ev.prob_until( at_n, until1.hold, until1.goal );
    const auto p2 = ev.prob_until( at_n, until2.hold, until2.goal );
    if ( !p1.is_point() || !p2.is_point() )
        throw error( error_kind::invalid_argument, "verification chain did not resolve within budget" );
    report.p_phi1_at_N = p1.lo;
    report.p_phi2_at_N = p2.lo;
    report.t = p1.lo * rational{ 2 };

    const auto verdict = ev.eval_state( at_c, instantiate_check_formula( art, report.t ) );
    if ( verdict == pctl::three_valued::unknown )
        throw error( error_kind::invalid_argument, "check formula undetermined within budget" );
    report.formula_holds = verdict == pctl::three_valued::is_true;
    return report;
}

certify_report certify( const pcp_instance& inst, const index_word& w )
{
    return certify( compile( inst ), inst, w );
}

namespace
{

void check_t( const rational& t )
{
    if ( t.sign() <= 0 || t >= rational{ 1 } )
        throw error( error_kind::t_out_of_range, "t = " + t.to_string() + " must satisfy 0 < t < 1" );
}

} // namespace

pctl::state_ptr instantiate_top_formula( const reduction_artifact& art, const rational& t )
{
    check_t( t );
    return pctl::bind_placeholder( art.top_formula, t );
}

pctl::state_ptr instantiate_check_formula( const reduction_artifact& art, const rational& t )
{
    check_t( t );
    return pctl::bind_placeholder( art.at_check, t );
}

} // namespace ppda::reduction
