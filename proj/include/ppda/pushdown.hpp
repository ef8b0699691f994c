#pragma once

#include "ppda/markov_chain.hpp"
#include "ppda/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ppda
{

using symbol = std::string;

// A control state (absent for pBPA) plus a stack word, top first.
struct configuration
{
    std::optional< std::string > control;
    std::vector< symbol > stack;

    [[nodiscard]] bool empty() const { return stack.empty(); }
    [[nodiscard]] const symbol& top() const { return stack.front(); }

    // "X Y Z" top first, "~" for the empty stack; pPDS configurations are
    // prefixed "q:", e.g. "q:X Y" or "q:~".
    [[nodiscard]] std::string encode() const;
    [[nodiscard]] chain_state state() const { return { encode() }; }
    [[nodiscard]] static configuration decode( std::string_view text );

    friend bool operator==( const configuration&, const configuration& ) = default;
};

struct weighted_configuration
{
    configuration config;
    rational probability;
};

struct bpa_rule
{
    symbol head;
    std::vector< symbol > body; // replaces the head; empty = pop
    rational probability;

    friend bool operator==( const bpa_rule&, const bpa_rule& ) = default;
};

// Stateless probabilistic pushdown process. The alphabet is every symbol that
// occurs in some rule.
class bpa
{
    std::vector< bpa_rule > _rules;
    std::map< symbol, std::vector< std::size_t > > _by_head;
    std::set< symbol > _alphabet;

public:
    bpa() = default;
    explicit bpa( std::vector< bpa_rule > rules );

    [[nodiscard]] const std::vector< bpa_rule >& rules() const { return _rules; }
    [[nodiscard]] const std::set< symbol >& alphabet() const { return _alphabet; }
    [[nodiscard]] std::vector< const bpa_rule* > rules_for( const symbol& head ) const;

    friend bool operator==( const bpa& a, const bpa& b ) { return a._rules == b._rules; }
};

struct ppds_rule
{
    std::string from;
    symbol head;
    std::string to;
    std::vector< symbol > body;
    rational probability;

    friend bool operator==( const ppds_rule&, const ppds_rule& ) = default;
};

// Probabilistic pushdown process with finitely many control states.
class ppds
{
    std::vector< ppds_rule > _rules;
    std::map< std::pair< std::string, symbol >, std::vector< std::size_t > > _by_head;
    std::set< std::string > _states;
    std::set< symbol > _alphabet;

public:
    ppds() = default;
    explicit ppds( std::vector< ppds_rule > rules );

    [[nodiscard]] const std::vector< ppds_rule >& rules() const { return _rules; }
    [[nodiscard]] const std::set< std::string >& states() const { return _states; }
    [[nodiscard]] const std::set< symbol >& alphabet() const { return _alphabet; }
    [[nodiscard]] std::vector< const ppds_rule* > rules_for( const std::string& state, const symbol& head ) const;

    friend bool operator==( const ppds& a, const ppds& b ) { return a._rules == b._rules; }
};

using model = std::variant< bpa, ppds >;

// A pBPA is a pPDS with a single control state.
[[nodiscard]] ppds embed( const bpa& m, const std::string& state = "q" );

struct validation_report
{
    std::vector< std::string > violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

[[nodiscard]] validation_report validate_model( const bpa& m );
[[nodiscard]] validation_report validate_model( const ppds& m );
[[nodiscard]] validation_report validate_model( const model& m );

// One step of the induced chain, successors sorted by encoding. The empty
// stack steps to itself with probability 1. Throws unknown_symbol.
[[nodiscard]] std::vector< weighted_configuration > step( const bpa& m, const configuration& c );
[[nodiscard]] std::vector< weighted_configuration > step( const ppds& m, const configuration& c );
[[nodiscard]] std::vector< weighted_configuration > step( const model& m, const configuration& c );

// A configuration head: the top symbol, with its control state for pPDS.
struct head_pattern
{
    std::optional< std::string > control;
    symbol top;

    friend auto operator<=>( const head_pattern&, const head_pattern& ) = default;
};

class simple_assignment
{
    std::map< std::string, std::set< head_pattern > > _heads;
    std::map< head_pattern, label_set > _by_head;

public:
    void add( const std::string& proposition, const head_pattern& head )
    {
        _heads[ proposition ].insert( head );
        _by_head[ head ].insert( proposition );
    }
    void declare( const std::string& proposition ) { _heads[ proposition ]; }

    [[nodiscard]] bool declared( const std::string& proposition ) const { return _heads.count( proposition ) != 0; }
    [[nodiscard]] const std::map< std::string, std::set< head_pattern > >& heads() const { return _heads; }
    [[nodiscard]] label_set labels_of( const head_pattern& head ) const
    {
        const auto it = _by_head.find( head );
        return it == _by_head.end() ? label_set{} : it->second;
    }

    // Every stack symbol is a proposition satisfied exactly when it is on top
    // (for pPDS: "q:X" for each control state q and symbol X).
    [[nodiscard]] static simple_assignment symbol_propositions( const model& m );
};

// Deterministic automaton with a partial transition function; a missing
// transition rejects.
class dfa
{
    std::size_t _initial = 0;
    std::set< std::size_t > _accepting;
    std::map< std::pair< std::size_t, symbol >, std::size_t > _delta;

public:
    explicit dfa( std::size_t initial = 0 ) : _initial{ initial } {}

    void add_transition( std::size_t from, const symbol& letter, std::size_t to ) { _delta[ { from, letter } ] = to; }
    void add_accepting( std::size_t state ) { _accepting.insert( state ); }

    [[nodiscard]] bool accepts( std::span< const symbol > word ) const;
};

class regular_assignment
{
    std::map< std::string, dfa > _automata;

public:
    void add( const std::string& proposition, dfa automaton ) { _automata.insert_or_assign( proposition, std::move( automaton ) ); }

    [[nodiscard]] bool declared( const std::string& proposition ) const { return _automata.count( proposition ) != 0; }
    [[nodiscard]] const std::map< std::string, dfa >& automata() const { return _automata; }
};

using assignment = std::variant< simple_assignment, regular_assignment >;

// Simple: head membership. Regular: the automaton reads the control state (if
// any) and then the stack bottom-up. Empty-stack configurations satisfy no
// proposition. Throws undeclared_proposition.
[[nodiscard]] bool eval_assignment( const assignment& nu, const std::string& proposition, const configuration& c );
[[nodiscard]] label_set labels( const assignment& nu, const configuration& c );

// Markov chain over configurations. Throws invalid_model if validation fails.
[[nodiscard]] chain_generator induced_chain( const model& m, const assignment& nu, const configuration& start );
// Shares m and nu without copying; m must already pass validate_model.
[[nodiscard]] chain_generator induced_chain( std::shared_ptr< const model > m, std::shared_ptr< const assignment > nu,
                                             const configuration& start );

// Line format `HEAD -> SYM SYM? [RAT]`, `~` for the empty word, `#` comments.
// pPDS rules carry control states as `q:X -> p:Y Z [RAT]`. Throws syntax_error
// with a 1-based line number.
[[nodiscard]] model parse_model( std::string_view text );
[[nodiscard]] std::string serialize_model( const model& m );

} // namespace ppda
