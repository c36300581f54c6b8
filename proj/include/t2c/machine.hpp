#ifndef T2C_MACHINE_HPP
#define T2C_MACHINE_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "t2c/prefix.hpp"

namespace t2c {

struct MachineConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Move { Left, Right, Stay };

/// One transition rule. Reads may be wildcards, writes may keep the read
/// symbol; the first listed matching rule fires.
struct Transition {
  std::string state;
  std::vector<std::string> reads;   // input, advice, work tapes; "*" = any
  std::string next_state;
  std::vector<std::string> writes;  // work tapes; "=" = keep
  std::vector<Move> moves;          // input, advice, work tapes
  std::string emit;                 // output symbol, or "-" for none
};

/// Outcome of a finite-fuel run. Halting rejects the guess and is final
/// for every extension of the supplied prefixes; a paused or fuel-exhausted
/// run reports its write-once output and how many cells it consumed.
struct RunOutcome {
  bool halted = false;
  Fuel steps = 0;
  Prefix output;
  Fuel input_use = 0;
  Fuel advice_use = 0;
};

/// A literal tape-level type-2 machine: read-only input and advice tapes,
/// work tapes, and a write-once output tape whose head only moves right.
struct TypeTwoMachine {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;  // must contain the blank "_"
  int work_tapes = 1;
  Alphabet output_alphabet = Alphabet::Binary;
  std::vector<Transition> transitions;

  static constexpr const char* kHalt = "HALT";

  void validate() const;

  /// Parse the machine-description text format: sections `states`,
  /// `alphabet`, `tapes`, `transitions`, one rule per line
  /// `state reads... -> state writes... moves... emit`.
  static TypeTwoMachine parse(std::istream& in);
  static TypeTwoMachine parse_string(const std::string& text);
  static TypeTwoMachine load(const std::string& path);
};

/// Deterministic step simulation for at most `fuel` steps. Reading past a
/// supplied prefix pauses the run; the outcome then reports use counters.
RunOutcome run(const TypeTwoMachine& m, const Prefix& input, const Prefix& advice, Fuel fuel);

/// Small shipped machines used across tests and examples.
TypeTwoMachine copy_machine();
TypeTwoMachine halt_machine();
TypeTwoMachine first_one_machine();
TypeTwoMachine wkl_verifier_machine();

}  // namespace t2c

#endif  // T2C_MACHINE_HPP
