#pragma once

// Ring presentations, verification suites and the prismcheck command line.
//
//   ring    ::= gen (',' gen)*
//   gen     ::= NAME ('^±1' | '^+-1')?
//   framing ::= assign ((';' | newline) assign)*
//   assign  ::= NAME '->' expr
//   expr    ::= term (('+' | '-') term)*
//   term    ::= unary ('*' unary)*
//   unary   ::= '-' unary | power
//   power   ::= atom ('^' '-'? INT)?
//   atom    ::= INT | 'p' | 'q' | NAME | '(' expr ')'

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "prism/qderham.hpp"

namespace prism {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Integer, P, Q, Var, Neg, Add, Sub, Mul, Pow };
  Kind kind = Kind::Integer;
  Int value;         // Integer
  std::string name;  // Var
  long exponent = 0; // Pow
  std::vector<ExprPtr> args;
};

std::string to_string(const Expr& e);
ExprPtr parse_expression(const std::string& text);

struct RingPresentation {
  std::vector<Generator> generators;
  std::vector<std::pair<std::string, ExprPtr>> framing;  // in generator order after normalization
};

/// Throws ParseError(line, col, expected).
RingPresentation parse_presentation(const std::string& text);
/// Adds "x -> expr" assignments to an existing presentation.
void parse_framing(RingPresentation& pres, const std::string& text);
/// Normal form: "x^±1, y" plus one "x -> expr" per framed coordinate.
std::string print_ring(const RingPresentation& pres);
std::string print_framing(const RingPresentation& pres);

LPoly evaluate(const Expr& e, const BaseRingPtr& base, const std::vector<Generator>& gens);
FramedAlgebraPtr build_algebra(const RingPresentation& pres, const BaseRingPtr& base);

struct SuiteConfig {
  std::string suite = "all";
  unsigned long p = 3;
  unsigned N = 3;       // --prec
  unsigned M = 4;       // --series-prec, depth in (t-1)
  unsigned K = 2;       // --root-depth
  int window = -1;      // --window; -1 means 2p^2
  std::uint64_t seed = 1;
  std::string out;
  bool timings = false;

  int effective_window() const { return window >= 0 ? window : static_cast<int>(2 * p * p); }
};

struct CaseResult {
  std::string name;
  std::string status;  // pass | fail | skip
  std::string witness;
  long long millis = 0;
  bool defect = false;
};

const std::vector<std::string>& suite_names();
/// Runs one suite (or "all"), sorted by case name.
std::vector<CaseResult> run_suite(const SuiteConfig& cfg);

/// Entry point of the command-line tool: 0 all pass, 2 usage, 3 defect.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prism
