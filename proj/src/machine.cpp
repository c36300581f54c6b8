#include "t2c/machine.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace t2c {

namespace {

Move parse_move(const std::string& s) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  if (s == "S") return Move::Stay;
  throw MachineConfigError("bad move: " + s);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    out.push_back(t);
  }
  return out;
}

// Transition table with interned symbols, built once per run.
struct Compiled {
  int blank = -1;
  std::map<std::string, int> sym_id;
  std::map<std::string, int> state_id;
  int halt_id = -1;
  struct Rule {
    std::vector<int> reads;   // -1 = wildcard
    int next_state;
    std::vector<int> writes;  // -1 = keep
    std::vector<Move> moves;
    int emit;                 // -1 = none
  };
  std::vector<std::vector<Rule>> by_state;
};

Compiled compile(const TypeTwoMachine& m) {
  m.validate();
  Compiled c;
  for (const auto& s : m.alphabet)
    c.sym_id.emplace(s, static_cast<int>(c.sym_id.size()));
  c.blank = c.sym_id.at("_");
  for (const auto& s : m.states)
    c.state_id.emplace(s, static_cast<int>(c.state_id.size()));
  c.halt_id = static_cast<int>(c.state_id.size());
  c.state_id.emplace(TypeTwoMachine::kHalt, c.halt_id);
  c.by_state.resize(c.state_id.size());
  auto sym = [&](const std::string& s) {
    auto it = c.sym_id.find(s);
    if (it == c.sym_id.end()) throw MachineConfigError("unknown symbol: " + s);
    return it->second;
  };
  for (const auto& t : m.transitions) {
    Compiled::Rule r;
    for (const auto& s : t.reads) r.reads.push_back(s == "*" ? -1 : sym(s));
    auto st = c.state_id.find(t.next_state);
    if (st == c.state_id.end()) throw MachineConfigError("unknown state: " + t.next_state);
    r.next_state = st->second;
    for (const auto& s : t.writes) r.writes.push_back(s == "=" ? -1 : sym(s));
    r.moves = t.moves;
    r.emit = t.emit == "-" ? -1 : sym(t.emit);
    auto from = c.state_id.find(t.state);
    if (from == c.state_id.end()) throw MachineConfigError("unknown state: " + t.state);
    c.by_state[from->second].push_back(std::move(r));
  }
  return c;
}

std::size_t moved(std::size_t pos, Move m) {
  switch (m) {
    case Move::Left: return pos == 0 ? 0 : pos - 1;
    case Move::Right: return pos + 1;
    case Move::Stay: return pos;
  }
  return pos;
}

}  // namespace

void TypeTwoMachine::validate() const {
  if (states.empty()) throw MachineConfigError("no states");
  if (std::find(alphabet.begin(), alphabet.end(), "_") == alphabet.end())
    throw MachineConfigError("alphabet lacks blank _");
  if (work_tapes < 0) throw MachineConfigError("negative work tape count");
  std::size_t reads = 2 + static_cast<std::size_t>(work_tapes);
  for (const auto& t : transitions) {
    if (t.reads.size() != reads || t.writes.size() != static_cast<std::size_t>(work_tapes) ||
        t.moves.size() != reads)
      throw MachineConfigError("transition arity mismatch");
  }
}

RunOutcome run(const TypeTwoMachine& m, const Prefix& input, const Prefix& advice, Fuel fuel) {
  Compiled c = compile(m);
  auto tape_symbol = [&](const Prefix& p, std::size_t i) {
    auto it = c.sym_id.find(p.at(i).str());
    if (it == c.sym_id.end())
      throw MachineConfigError("tape symbol not in machine alphabet: " + p.at(i).str());
    return it->second;
  };

  int state = 0;
  std::size_t in_head = 0, adv_head = 0;
  std::vector<std::size_t> work_head(m.work_tapes, 0);
  std::vector<std::vector<int>> work(m.work_tapes);
  RunOutcome out;
  out.output = Prefix(m.output_alphabet);

  // Names of numeric alphabet symbols, for emission.
  std::vector<std::optional<Symbol>> numeric(m.alphabet.size());
  for (std::size_t i = 0; i < m.alphabet.size(); ++i) {
    const std::string& name = m.alphabet[i];
    if (!name.empty() && name.find_first_not_of("0123456789") == std::string::npos)
      numeric[i] = Symbol(name);
  }

  for (Fuel step = 0; step < fuel; ++step) {
    if (in_head >= input.size()) {
      out.input_use = std::max<Fuel>(out.input_use, static_cast<Fuel>(in_head) + 1);
      out.steps = step;
      return out;  // paused: needs a longer input prefix
    }
    if (adv_head >= advice.size()) {
      out.advice_use = std::max<Fuel>(out.advice_use, static_cast<Fuel>(adv_head) + 1);
      out.steps = step;
      return out;  // paused: needs a longer advice prefix
    }
    out.input_use = std::max<Fuel>(out.input_use, static_cast<Fuel>(in_head) + 1);
    out.advice_use = std::max<Fuel>(out.advice_use, static_cast<Fuel>(adv_head) + 1);

    std::vector<int> reads(2 + m.work_tapes);
    reads[0] = tape_symbol(input, in_head);
    reads[1] = tape_symbol(advice, adv_head);
    for (int t = 0; t < m.work_tapes; ++t) {
      auto& tape = work[t];
      if (work_head[t] >= tape.size()) tape.resize(work_head[t] + 1, c.blank);
      reads[2 + t] = tape[work_head[t]];
    }

    const Compiled::Rule* rule = nullptr;
    for (const auto& r : c.by_state[state]) {
      bool match = true;
      for (std::size_t i = 0; i < reads.size(); ++i)
        if (r.reads[i] != -1 && r.reads[i] != reads[i]) { match = false; break; }
      if (match) { rule = &r; break; }
    }
    if (!rule) throw MachineConfigError("no transition from state " + m.states[state]);

    for (int t = 0; t < m.work_tapes; ++t)
      if (rule->writes[t] != -1) work[t][work_head[t]] = rule->writes[t];
    if (rule->emit != -1) {
      if (!numeric[rule->emit])
        throw MachineConfigError("emitted symbol is not numeric: " + m.alphabet[rule->emit]);
      out.output.push_back(*numeric[rule->emit]);
    }
    in_head = moved(in_head, rule->moves[0]);
    adv_head = moved(adv_head, rule->moves[1]);
    for (int t = 0; t < m.work_tapes; ++t) work_head[t] = moved(work_head[t], rule->moves[2 + t]);

    if (rule->next_state == c.halt_id) {
      out.halted = true;
      out.steps = step + 1;
      return out;
    }
    state = rule->next_state;
  }
  out.steps = fuel;
  return out;
}

TypeTwoMachine TypeTwoMachine::parse(std::istream& in) {
  TypeTwoMachine m;
  m.work_tapes = -1;
  bool in_transitions = false;
  std::string line;
  while (std::getline(in, line)) {
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (!in_transitions) {
      if (tok[0] == "states")
        m.states.assign(tok.begin() + 1, tok.end());
      else if (tok[0] == "alphabet")
        m.alphabet.assign(tok.begin() + 1, tok.end());
      else if (tok[0] == "tapes") {
        if (tok.size() != 2) throw MachineConfigError("tapes section expects a count");
        m.work_tapes = std::stoi(tok[1]);
      } else if (tok[0] == "output") {
        if (tok.size() != 2 || (tok[1] != "binary" && tok[1] != "natural"))
          throw MachineConfigError("output section expects binary|natural");
        m.output_alphabet = tok[1] == "binary" ? Alphabet::Binary : Alphabet::Natural;
      } else if (tok[0] == "transitions")
        in_transitions = true;
      else
        throw MachineConfigError("unknown section: " + tok[0]);
      continue;
    }
    if (m.work_tapes < 0) throw MachineConfigError("tapes section must precede transitions");
    std::size_t k = static_cast<std::size_t>(m.work_tapes);
    // state reads(2+k) -> state writes(k) moves(2+k) emit
    std::size_t expect = 1 + (2 + k) + 1 + 1 + k + (2 + k) + 1;
    if (tok.size() != expect) throw MachineConfigError("bad transition line: " + line);
    std::size_t i = 0;
    Transition t;
    t.state = tok[i++];
    for (std::size_t j = 0; j < 2 + k; ++j) t.reads.push_back(tok[i++]);
    if (tok[i++] != "->") throw MachineConfigError("expected -> in: " + line);
    t.next_state = tok[i++];
    for (std::size_t j = 0; j < k; ++j) t.writes.push_back(tok[i++]);
    for (std::size_t j = 0; j < 2 + k; ++j) t.moves.push_back(parse_move(tok[i++]));
    t.emit = tok[i++];
    m.transitions.push_back(std::move(t));
  }
  if (m.work_tapes < 0) throw MachineConfigError("missing tapes section");
  m.validate();
  return m;
}

TypeTwoMachine TypeTwoMachine::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

TypeTwoMachine TypeTwoMachine::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MachineConfigError("cannot open machine file: " + path);
  return parse(in);
}

TypeTwoMachine copy_machine() {
  return TypeTwoMachine::parse_string(R"(
states CP
alphabet _ 0 1
tapes 1
output binary
transitions
CP 0 * * -> CP = R S S 0
CP 1 * * -> CP = R S S 1
)");
}

TypeTwoMachine halt_machine() {
  return TypeTwoMachine::parse_string(R"(
states H0
alphabet _ 0 1
tapes 1
output binary
transitions
H0 * * * -> HALT = S S S -
)");
}

// Guess: the position n of the first 1, as the unary code 0^n 1. The match
// loop re-emits the code while checking it against the input; a mismatch in
// either direction rejects the guess.
TypeTwoMachine first_one_machine() {
  return TypeTwoMachine::parse_string(R"(
states M LOOP
alphabet _ 0 1
tapes 1
output binary
transitions
M 0 0 * -> M = R R S 0
M 1 0 * -> HALT = S S S -
M 1 1 * -> LOOP = S S S 1
M 0 1 * -> HALT = S S S -
LOOP * * * -> LOOP = S S S 0
)");
}

// Guess: a path through the tree written on the input tape as a
// characteristic sequence in heap order (node index: root 0, children of i
// at 2i+1 and 2i+2). Work tape 1 holds the current node index in unary
// behind an X marker; work tape 2 is scratch for doubling and for walking
// the input head out to the node's cell and back. A 0 at a visited cell
// rejects the guess; the guessed bit is echoed to the output as soon as it
// is read, which is sound because a rejected run's output is discarded.
TypeTwoMachine wkl_verifier_machine() {
  return TypeTwoMachine::parse_string(R"(
states I0 S0 D0 D0x D1 D1x A1 R2 R1 C RET R3
alphabet _ 0 1 X
tapes 2
output binary
transitions
I0 * * _ _ -> S0 X X S S R R -
S0 * 0 * * -> D0 = = S R S S 0
S0 * 1 * * -> D1 = = S R S S 1
D0 * * 1 _ -> D0x _ 1 S S S R -
D0x * * _ _ -> D0 = 1 S S R R -
D1 * * 1 _ -> D1x _ 1 S S S R -
D1x * * _ _ -> D1 = 1 S S R R -
D0 * * _ _ -> R2 = 1 S S S R -
D1 * * _ _ -> A1 = 1 S S S R -
A1 * * _ _ -> R2 = 1 S S S R -
R2 * * * _ -> R2 = = S S S L -
R2 * * * 1 -> R2 = = S S S L -
R2 * * * X -> R1 = = S S S R -
R1 * * _ * -> R1 = = S S L S -
R1 * * X * -> C = = S S R S -
C * * _ 1 -> C 1 = R S R R -
C 1 * _ _ -> RET = = S S S L -
C 0 * _ _ -> HALT = = S S S S -
RET * * * 1 -> RET = _ L S S L -
RET * * * X -> R3 = = S S S R -
R3 * * _ * -> R3 = = S S L S -
R3 * * 1 * -> R3 = = S S L S -
R3 * * X * -> S0 = = S S R S -
)");
}

}  // namespace t2c
