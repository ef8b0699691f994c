#pragma once

#include "ppda/markov_chain.hpp"
#include "ppda/rational.hpp"
#include "ppda/reduction.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Brute-force ground truth. Only search_via_reduction goes through the PCTL
// evaluator (via certify); everything else is independent of it.
namespace ppda::oracle
{

using reduction::index_word;
using reduction::pcp_instance;

// Visits every index word over 1..n, shortest first, then lexicographically,
// up to length max_k. Stops early when the visitor returns true.
void for_each_index_word( std::size_t n, std::size_t max_k, const std::function< bool( const index_word& ) >& visit );

// First solution in the order above, or nothing up to max_k.
[[nodiscard]] std::optional< index_word > brute_force_pcp( const pcp_instance& inst, std::size_t max_k );

using state_predicate = std::function< bool( const chain_state& ) >;

struct until_predicates
{
    state_predicate hold;
    state_predicate goal;
};

// Label-level readings of the two until formulas of the reduction.
[[nodiscard]] until_predicates phi1_predicates( const chain_generator& gen );
[[nodiscard]] until_predicates phi2_predicates( const chain_generator& gen );

// Sum of the probabilities of all minimal paths from s that reach `goal`
// through `hold` states, by plain depth-first enumeration. A dead state (a
// probability-1 self-loop) ends a path. Throws unresolved_path when a path is
// still undecided after max_depth steps.
[[nodiscard]] rational enumerate_until_probability( const chain_generator& gen, const chain_state& s,
                                                    const state_predicate& hold, const state_predicate& goal,
                                                    std::size_t max_depth );

// First index word (same order as brute_force_pcp) whose certificate holds.
[[nodiscard]] std::optional< index_word > search_via_reduction( const pcp_instance& inst, std::size_t max_k,
                                                                reduction::compile_options options = {} );

struct expected_status
{
    std::optional< index_word > witness; // solvable when set
    std::size_t unsolvable_up_to = 0;
};

struct corpus_entry
{
    std::string name;
    pcp_instance instance;
    expected_status expected;
};

struct corpus
{
    std::vector< corpus_entry > entries;
};

// Lines `PATH solvable 1,2` or `PATH unsolvable K`, paths relative to the
// corpus file. Witnesses are checked on load; throws corpus_error.
[[nodiscard]] corpus parse_corpus( std::string_view text, const std::filesystem::path& base );
[[nodiscard]] corpus load_corpus( const std::filesystem::path& file );

struct corpus_row
{
    std::string name;
    std::optional< index_word > brute;
    std::optional< index_word > via_reduction;
    bool agree = false;
    bool matches_expected = false;
    bool invariants_hold = false;
    std::string note;
    double millis = 0;
};

struct corpus_report
{
    std::vector< corpus_row > rows;

    [[nodiscard]] bool all_agree() const;
    [[nodiscard]] std::string to_text( bool with_timing = true ) const;
};

[[nodiscard]] corpus_report corpus_check( const corpus& c, std::size_t max_k );

} // namespace ppda::oracle
