#pragma once

#include "ppda/reduction.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

// Machine checks of the construction's properties at desk scale. Each check
// returns a result instead of throwing so a driver can report all of them.
namespace ppda::lemmas
{

using reduction::index_word;
using reduction::pcp_instance;

struct lemma_result
{
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::string detail; // first counterexample, if any
    double seconds = 0;

    explicit lemma_result( std::string n ) : name{ std::move( n ) } {}
};

// mt19937_64 output is fixed by the standard; draws avoid the
// implementation-defined std distributions so runs match across platforms.
class seeded_rng
{
    std::mt19937_64 _engine;

public:
    explicit seeded_rng( std::uint64_t seed ) : _engine{ seed } {}

    // Uniform-ish integer in [0, bound).
    [[nodiscard]] std::size_t below( std::size_t bound ) { return static_cast< std::size_t >( _engine() % bound ); }
    [[nodiscard]] std::string ab_word( std::size_t min_length, std::size_t max_length );
};

[[nodiscard]] std::vector< index_word > all_index_words( std::size_t n, std::size_t max_k );
// Every instance with 1..max_n pairs of words over {A,B} of length <= max_len
// (degenerate all-empty instances excluded).
[[nodiscard]] std::vector< pcp_instance > all_instances( std::size_t max_n, std::size_t max_len );
[[nodiscard]] std::vector< pcp_instance > random_instances( seeded_rng& rng, std::size_t count, std::size_t max_n,
                                                            std::size_t max_len );

// rho(wZ') + rho_bar(wZ') = 1 for random w, 1 <= |w| <= max_len.
[[nodiscard]] lemma_result check_complement( std::uint64_t seed, std::size_t count, std::size_t max_len );
// rho(wZ') + rho_bar(w'Z') != 1 for random w != w'.
[[nodiscard]] lemma_result check_uniqueness( std::uint64_t seed, std::size_t count, std::size_t max_len );
// Exact P(phi1 from F alpha Z') = rho(reverse(u) Z'), likewise phi2 from S with rho_bar.
[[nodiscard]] lemma_result check_chain_agreement( const std::vector< pcp_instance >& instances, std::size_t max_k );
// P(phi at N alpha Z') is half of P(phi at F/S alpha Z').
[[nodiscard]] lemma_result check_halving( const std::vector< pcp_instance >& instances, std::size_t max_k );
// certify(...).formula_holds <=> check_solution(...).
[[nodiscard]] lemma_result check_biconditional( const std::vector< pcp_instance >& instances, std::size_t max_k,
                                                reduction::compile_options options = {} );
// C-headed configurations reachable from Z within max_rounds guesses are
// exactly the guess_config images, each reached by a single path whose
// probability is guess_path_probability.
[[nodiscard]] lemma_result check_reachability( const pcp_instance& inst, std::size_t max_rounds );
// pctl prob_until equals plain enumeration on random verification-phase
// configurations with at most max_pairs stacked pairs.
[[nodiscard]] lemma_result check_oracle_equivalence( std::uint64_t seed, std::size_t count, std::size_t max_pairs );

struct suite_options
{
    std::uint64_t seed = 1;
    std::size_t max_n = 2;
    std::size_t max_m = 2;
    std::size_t max_k = 3;
    std::size_t instances = 24;
};

[[nodiscard]] std::vector< lemma_result > run_suite( const suite_options& options );

} // namespace ppda::lemmas
