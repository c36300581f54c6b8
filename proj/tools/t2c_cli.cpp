// Command-line driver: every translation and executor of the library,
// with deterministic text output. Exit codes: 0 on success, 1 when the
// fuel budget ran out before convergence, 2 on malformed input files.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "t2c/choice.hpp"
#include "t2c/lowjump.hpp"
#include "t2c/measurable.hpp"
#include "t2c/omega.hpp"

using namespace t2c;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFuel = 1;
constexpr int kExitBadInput = 2;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- point literals ---------------------------------------------------------
// 0.75sd / 3/4sd : signed-digit point of [0,1]
// 0110...b / 0110b : bit prefix extended by zeros (Cantor space)

Rational parse_rat_lit(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw BadInput("bad rational literal: " + text);
  }
}

std::string strip_dots(std::string s) {
  auto pos = s.find("...");
  if (pos != std::string::npos) s.erase(pos, 3);
  return s;
}

PointName parse_interval_point(const std::string& lit) {
  if (lit.size() < 2 || lit.substr(lit.size() - 2) != "sd")
    throw BadInput("expected a signed-digit literal like 0.75sd: " + lit);
  Rational x = parse_rat_lit(lit.substr(0, lit.size() - 2));
  if (x < 0 || x > 1) throw BadInput("point outside [0,1]: " + lit);
  return PointName::signed_digit(x);
}

StreamName parse_bit_stream(const std::string& lit) {
  if (lit.empty() || lit.back() != 'b')
    throw BadInput("expected a bit literal like 0110...b: " + lit);
  std::string bits = strip_dots(lit.substr(0, lit.size() - 1));
  for (char c : bits)
    if (c != '0' && c != '1') throw BadInput("bad bit literal: " + lit);
  if (bits.empty()) return StreamName::constant(Alphabet::Binary, 0);
  return StreamName::periodic(Prefix::bits(bits), Prefix::bits("0"));
}

// -- function bundles ---------------------------------------------------------
// Manifest line: `d2 <domain> <codomain> <builder> [arg]` or
// `pw <domain> <codomain> <builder> [arg]`; builders: step, staircase,
// identity, identity-cantor, constant <rational>.

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open file: " + path);
  return in;
}

struct Manifest {
  std::string kind, domain, codomain, builder, arg;
};

Manifest read_manifest(const std::string& path, const std::string& want_kind) {
  std::ifstream in = open_file(path);
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  std::istringstream ls(line);
  Manifest m;
  ls >> m.kind >> m.domain >> m.codomain >> m.builder >> m.arg;
  if (m.kind != want_kind)
    throw BadInput(path + ": expected a '" + want_kind + "' manifest, got '" + m.kind + "'");
  return m;
}

void check_spaces(const Manifest& m, const std::string& dom, const std::string& cod) {
  if (m.domain != dom || m.codomain != cod)
    throw BadInput("manifest spaces " + m.domain + " " + m.codomain + " do not match builder " +
                   m.builder);
}

Delta2FunctionName load_d2(const std::string& path) {
  Manifest m = read_manifest(path, "d2");
  if (m.builder == "step") {
    check_spaces(m, "unit_interval", "unit_interval");
    return step_delta2();
  }
  if (m.builder == "staircase") {
    check_spaces(m, "unit_interval", "unit_interval");
    return staircase_delta2();
  }
  if (m.builder == "identity") {
    check_spaces(m, "unit_interval", "unit_interval");
    return identity_delta2();
  }
  if (m.builder == "identity-cantor") {
    check_spaces(m, "cantor", "cantor");
    return identity_cantor_delta2();
  }
  if (m.builder == "constant") {
    check_spaces(m, "unit_interval", "unit_interval");
    return constant_delta2(parse_rat_lit(m.arg));
  }
  throw BadInput(path + ": unknown builder " + m.builder);
}

PiecewiseName load_pw(const std::string& path) {
  Manifest m = read_manifest(path, "pw");
  if (m.builder == "step") {
    check_spaces(m, "unit_interval", "unit_interval");
    return step_piecewise();
  }
  if (m.builder == "staircase") {
    check_spaces(m, "unit_interval", "unit_interval");
    return staircase_piecewise();
  }
  if (m.builder == "identity") {
    check_spaces(m, "unit_interval", "unit_interval");
    return identity_piecewise();
  }
  if (m.builder == "identity-cantor") {
    check_spaces(m, "cantor", "cantor");
    return identity_cantor_piecewise();
  }
  if (m.builder == "constant") {
    check_spaces(m, "unit_interval", "unit_interval");
    return constant_piecewise(parse_rat_lit(m.arg));
  }
  throw BadInput(path + ": unknown builder " + m.builder);
}

std::string rational_str(const Rational& r) {
  std::ostringstream out;
  out << numerator(r) << "/" << denominator(r);
  return out.str();
}

void print_trace(const RevisingOutput& trace) {
  for (const auto& ev : trace.events()) {
    if (ev.reset)
      std::cout << "stage " << ev.stage << " | reset\n";
    else
      std::cout << "stage " << ev.stage << " | emit " << ev.emitted.str() << "\n";
  }
}

/// Dyadic-code trace as successive rational approximations.
void print_code_approximations(const Prefix& codes) {
  for (std::size_t s = 0; s < codes.size(); ++s)
    std::cout << "approx " << s << ": " << rational_str(decode_dyadic(codes.at(s)).value())
              << "\n";
}

OpenEnumeration load_enumeration(const std::string& path) {
  if (path.empty()) return cylinder_enumeration();
  std::ifstream in = open_file(path);
  try {
    return parse_open_enumeration(in);
  } catch (const std::exception& e) {
    throw BadInput(std::string("bad enumeration file: ") + e.what());
  }
}

// -- self test ---------------------------------------------------------------

int run_selftest(Fuel fuel, Fuel depth) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << name << ": " << (ok ? "ok" : "FAILED") << "\n";
    if (!ok) ++failures;
  };

  std::vector<Prefix> digit_samples;
  for (int den : {3, 5, 7, 10, 64, 101})
    digit_samples.push_back(signed_digit_prefix(Rational(1, den), 12));
  report("digit-to-code realizer monotone",
         check_monotone(digit_to_code_realizer(), digit_samples, depth).ok());
  report("constant realizer monotone",
         check_monotone(constant_code_realizer(Rational(1, 3)), digit_samples, depth).ok());

  bool balls_ok = true;
  Delta2SetName d = step_delta2().inverse(interval_upper_open(Rational(1, 2)));
  for (std::size_t i = 0; i < 4 && balls_ok; ++i) {
    std::vector<Ball> prev;
    for (Fuel f = 1; f <= fuel; f *= 2) {
      auto now = d.open(i).enumerate(f);
      if (now.size() < prev.size()) balls_ok = false;
      for (std::size_t k = 0; k < prev.size() && balls_ok; ++k)
        if (now[k].center != prev[k].center || now[k].radius != prev[k].radius) balls_ok = false;
      prev = now;
    }
  }
  report("preimage enumerations monotone", balls_ok);

  bool jump_ok = true;
  OpenEnumeration en = cylinder_enumeration();
  StreamName p = StreamName::periodic(Prefix::bits("0110"), Prefix::bits("01"));
  for (std::size_t i = 0; i < 12 && jump_ok; ++i) {
    int seen = 0;
    for (Fuel s = 1; s <= 16; ++s) {
      int b = jump_approx(p, en, i, s);
      if (b < seen) jump_ok = false;
      seen = b;
    }
  }
  report("jump bits never retract", jump_ok);

  bool verdict_ok = true;
  for (int k = 0; k <= 8 && verdict_ok; ++k) {
    StabilizedVerdict v =
        delta2_stabilized(d, PointName::signed_digit(Rational(k, 8)), 32);
    verdict_ok = v.bit == (Rational(k, 8) >= Rational(1, 2) ? 1 : 0) && v.changes <= 2;
  }
  report("step preimage verdicts stabilize", verdict_ok);

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? kExitOk : kExitFuel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"executable translations between preimage-named and piecewise functions"};
  app.require_subcommand(1);

  Fuel fuel = 64, depth = 10;
  bool trace = false;
  std::string machine_path, tree_path, fn_path, enum_path;
  std::string point_lit, input_lit, advice_space = "nat", bound_side = "upper";
  std::string bound_value = "1/2";
  std::size_t index = 0;
  bool index_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--fuel", fuel, "step/stage budget");
    sub->add_option("--depth", depth, "depth cap (prefix length / piece count)");
    sub->add_flag("--trace", trace, "print staged trace lines");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run a literal machine on finite prefixes");
  run_cmd->add_option("--machine", machine_path, "machine description (.t2m)")->required();
  run_cmd->add_option("--input", input_lit, "input literal (b or n form)");
  run_cmd->add_option("--advice", point_lit, "advice literal (b or n form)");
  add_common(run_cmd);

  CLI::App* ndtm_cmd = app.add_subcommand("ndtm", "guess-and-verify execution of a machine");
  ndtm_cmd->add_option("--machine", machine_path, "machine description (.t2m)")->required();
  ndtm_cmd->add_option("--advice-space", advice_space, "nat or cantor");
  ndtm_cmd->add_option("--input", input_lit, "input literal (b form)");
  add_common(ndtm_cmd);

  CLI::App* wkl_cmd = app.add_subcommand("wkl", "leftmost surviving path of a co-c.e. tree");
  wkl_cmd->add_option("--tree", tree_path, "rejection schedule (.tree)")->required();
  add_common(wkl_cmd);

  CLI::App* evald2 = app.add_subcommand("eval-d2", "evaluate a preimage-named function");
  evald2->add_option("--fn", fn_path, "function bundle (.d2)")->required();
  evald2->add_option("--point", point_lit, "input point (sd form)")->required();
  add_common(evald2);

  CLI::App* d2pw = app.add_subcommand("d2-to-pw", "derive a closed cover from preimages");
  d2pw->add_option("--fn", fn_path, "function bundle (.d2)")->required();
  d2pw->add_option("--point", point_lit, "optionally evaluate through the cover (sd form)");
  add_common(d2pw);

  CLI::App* pwd2 = app.add_subcommand("pw-to-d2", "derive preimage names from a closed cover");
  pwd2->add_option("--fn", fn_path, "function bundle (.pw)")->required();
  pwd2->add_option("--point", point_lit, "point to test (sd form)")->required();
  pwd2->add_option("--side", bound_side, "codomain open: upper (a,1] or lower [0,b)");
  pwd2->add_option("--bound", bound_value, "endpoint of the codomain open");
  add_common(pwd2);

  CLI::App* evalpw = app.add_subcommand("eval-pw", "evaluate a piecewise-named function");
  evalpw->add_option("--fn", fn_path, "function bundle (.pw)")->required();
  evalpw->add_option("--point", point_lit, "input point (sd or b form)")->required();
  add_common(evalpw);

  CLI::App* jump_cmd = app.add_subcommand("jump", "stage-approximated jump bits");
  jump_cmd->add_option("--enum", enum_path, "open enumeration file (default: cylinders)");
  jump_cmd->add_option("--point", point_lit, "the point p (b form)")->required();
  jump_cmd->add_option("--index", index, "single bit index i")->each([&](const std::string&) {
    index_set = true;
  });
  add_common(jump_cmd);

  CLI::App* checkl = app.add_subcommand("check-l", "verify a limit sequence against the jump");
  checkl->add_option("--enum", enum_path, "open enumeration file (default: cylinders)");
  checkl->add_option("--point", point_lit, "the point q (b form)")->required();
  add_common(checkl);

  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suites");
  add_common(selftest);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      TypeTwoMachine m = [&] {
        try {
          return TypeTwoMachine::load(machine_path);
        } catch (const std::exception& e) {
          throw BadInput(e.what());
        }
      }();
      // Every step formally reads both heads, so supply zero tails rather
      // than empty tapes.
      Prefix in = (input_lit.empty() ? StreamName::constant(Alphabet::Binary, 0)
                                     : parse_bit_stream(input_lit))
                      .at(fuel);
      Prefix adv = (point_lit.empty() ? StreamName::constant(Alphabet::Binary, 0)
                                      : parse_bit_stream(point_lit))
                       .at(fuel);
      RunOutcome o = run(m, in, adv, fuel);
      std::cout << "output " << (o.output.empty() ? "-" : o.output.str()) << "\n"
                << "halted " << (o.halted ? 1 : 0) << "\n"
                << "steps " << o.steps << "\n";
      return kExitOk;
    }

    if (*ndtm_cmd) {
      TypeTwoMachine m = [&] {
        try {
          return TypeTwoMachine::load(machine_path);
        } catch (const std::exception& e) {
          throw BadInput(e.what());
        }
      }();
      StreamName in = input_lit.empty() ? StreamName::constant(Alphabet::Binary, 0)
                                        : parse_bit_stream(input_lit);
      if (advice_space == "nat") {
        auto nd = std::make_shared<const Ndtm>(m, AdviceSpace{AdviceTag::Nat});
        NatExecution e = execute_nat_advice(*nd, in, fuel);
        if (trace) print_trace(e.trace);
        std::cout << "candidate " << e.final_candidate << "\n"
                  << "resets " << e.trace.reset_count() << "\n"
                  << "value " << (e.trace.value().empty() ? "-" : e.trace.value().str()) << "\n";
        return e.trace.value().empty() ? kExitFuel : kExitOk;
      }
      if (advice_space == "cantor") {
        auto nd = std::make_shared<const Ndtm>(m, AdviceSpace{AdviceTag::Cantor});
        if (trace) {
          SurvivingTree tree(nd, in);
          write_cantor_trace(std::cout, tree, fuel, static_cast<std::size_t>(depth));
        }
        Prefix node = execute_cantor_leftmost(nd, in, static_cast<std::size_t>(depth)).at(fuel);
        std::cout << "leftmost " << (node.empty() ? "-" : node.str()) << "\n";
        return node.size() < static_cast<std::size_t>(depth) ? kExitFuel : kExitOk;
      }
      throw BadInput("unknown advice space: " + advice_space);
    }

    if (*wkl_cmd) {
      std::ifstream in = open_file(tree_path);
      auto rejected = [&] {
        try {
          return parse_rejection_schedule(in);
        } catch (const std::exception& e) {
          throw BadInput(e.what());
        }
      }();
      ChoiceInstance inst = cantor_choice_instance(cantor_closed_from_rejector(rejected));
      Prefix path = c_cantor_solver(inst, static_cast<std::size_t>(depth)).at(fuel);
      if (trace)
        for (Fuel t = 1; t <= std::min<Fuel>(fuel, 16); ++t)
          std::cout << "stage " << t << " | "
                    << c_cantor_solver(inst, static_cast<std::size_t>(depth)).at(t).str() << "\n";
      std::cout << path.str() << "\n";
      return path.size() < static_cast<std::size_t>(depth) ? kExitFuel : kExitOk;
    }

    if (*evald2) {
      Delta2FunctionName f = load_d2(fn_path);
      PointName x = parse_interval_point(point_lit);
      Fuel cap = std::min<Fuel>(fuel, 32);  // stages beyond this add no precision here
      FunctionEval e = eval_delta2(f, x, cap);
      if (trace) print_trace(e.trace);
      print_code_approximations(e.trace.value());
      std::cout << "resets " << e.trace.reset_count() << "\n"
                << "guess " << e.final_index << "\n";
      return e.trace.value().empty() ? kExitFuel : kExitOk;
    }

    if (*d2pw) {
      PiecewiseName g = delta2_to_piecewise(load_d2(fn_path));
      for (std::size_t mIdx = 0; mIdx < std::min<std::size_t>(static_cast<std::size_t>(depth), 8);
           ++mIdx) {
        Piece piece = g.piece(mIdx);
        std::size_t co = piece.set.co_enumerate ? piece.set.co_enumerate(8).size() : 0;
        std::cout << "piece " << mIdx << " | co-balls " << co << "\n";
      }
      if (!point_lit.empty()) {
        FunctionEval e = eval_piecewise(g, parse_interval_point(point_lit),
                                        std::min<Fuel>(fuel, 48));
        if (trace) print_trace(e.trace);
        Prefix codes = e.trace.value();
        std::cout << "value "
                  << (codes.empty() ? "-" : rational_str(decode_dyadic(codes.at(codes.size() - 1))
                                                             .value()))
                  << "\n"
                  << "piece " << e.final_index << "\n";
        return codes.empty() ? kExitFuel : kExitOk;
      }
      return kExitOk;
    }

    if (*pwd2) {
      Delta2FunctionName f = piecewise_to_delta2(load_pw(fn_path));
      Rational b = parse_rat_lit(bound_value);
      OpenSetName u = bound_side == "lower" ? interval_lower_open(b)
                      : bound_side == "upper"
                          ? interval_upper_open(b)
                          : throw BadInput("side must be upper or lower: " + bound_side);
      Delta2SetName dd = f.inverse(u);
      StabilizedVerdict v =
          delta2_stabilized(dd, parse_interval_point(point_lit), std::min<Fuel>(fuel, 64));
      std::cout << "verdict " << v.bit << "\n"
                << "changes " << v.changes << "\n"
                << "settled " << v.settled_stage << "\n";
      return kExitOk;
    }

    if (*evalpw) {
      PiecewiseName g = load_pw(fn_path);
      bool cantor = g.domain && g.domain->name == "cantor";
      PointName x = cantor ? PointName::cantor(parse_bit_stream(point_lit))
                           : parse_interval_point(point_lit);
      FunctionEval e = eval_piecewise(g, x, std::min<Fuel>(fuel, 64));
      if (trace) print_trace(e.trace);
      Prefix out = e.trace.value();
      if (cantor)
        std::cout << "value " << (out.empty() ? "-" : out.str()) << "\n";
      else
        std::cout << "value "
                  << (out.empty() ? "-"
                                  : rational_str(decode_dyadic(out.at(out.size() - 1)).value()))
                  << "\n";
      std::cout << "piece " << e.final_index << "\n"
                << "resets " << e.trace.reset_count() << "\n";
      return out.empty() ? kExitFuel : kExitOk;
    }

    if (*jump_cmd) {
      OpenEnumeration en = load_enumeration(enum_path);
      StreamName p = parse_bit_stream(point_lit);
      if (index_set) {
        if (trace)
          for (Fuel s = 1; s <= fuel; s *= 2)
            std::cout << "stage " << s << " | bit " << jump_approx(p, en, index, s) << "\n";
        std::cout << "bit " << jump_approx(p, en, index, fuel) << "\n";
        return kExitOk;
      }
      Prefix bits = jump_limit_name(p, en).at(std::min<Fuel>(depth, fuel));
      std::cout << bits.str() << "\n";
      return kExitOk;
    }

    if (*checkl) {
      OpenEnumeration en = load_enumeration(enum_path);
      StreamName q = parse_bit_stream(point_lit);
      auto ps = [q, en](std::size_t j) {
        return StreamName::from_stages(Alphabet::Binary, [q, en, j](Fuel f) {
          Prefix out(Alphabet::Binary);
          for (Fuel i = 0; i < f; ++i)
            out.push_back(
                jump_approx(q, en, static_cast<std::size_t>(i), static_cast<Fuel>(j)));
          return out;
        });
      };
      LInstanceReport r = check_l_instance(ps, q, en, depth);
      for (std::size_t i = 0; i < r.limit_bits.size(); ++i)
        std::cout << "pos " << i << " | limit " << r.limit_bits[i] << " | jump "
                  << r.jump_bits[i] << "\n";
      std::cout << "counterexamples " << r.counterexamples.size() << "\n"
                << "unstable " << r.unstable.size() << "\n"
                << (r.ok() ? "ok" : "mismatch") << "\n";
      return r.ok() ? kExitOk : kExitFuel;
    }

    if (*selftest) return run_selftest(fuel, std::min<Fuel>(depth, 12));
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
