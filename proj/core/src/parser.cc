#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "causalplan/parser.h"
#include "lexer.h"

namespace causalplan {
namespace {

using internal::Token;
using internal::TokenKind;

// Thrown inside one item (law, declaration, section) and caught at the item
// boundary, where the parser resynchronizes on the next ';' or section.
struct SyntaxError {
  Diagnostic diagnostic;
};

class Parser {
 public:
  Parser(std::string_view text, std::string file)
      : file_(std::move(file)), tokens_(internal::Tokenize(text, file_)) {}

  ParseResult<DomainDescription> ParseDomainFile() {
    domain_mode_ = true;
    if (!AtSection("sorts")) {
      Report(Peek(), "missing :sorts section");
      return Finish(std::move(domain_));
    }
    Take();
    while (At(TokenKind::kIdent)) {
      const Token name = Take();
      if (domain_.FindSort(name.text) != nullptr) {
        Report(name, "duplicate sort '" + name.text + "'");
        continue;
      }
      Sort sort;
      sort.span = name.span;
      sort.name = name.text;
      domain_.sorts.push_back(std::move(sort));
    }
    if (!ExpectSection("objects")) return Finish(std::move(domain_));
    ParseItems([&] { ParseObjectDecl(); });
    if (!ExpectSection("constants")) return Finish(std::move(domain_));
    ParseItems([&] { ParseConstantDecl(); });
    if (AtSection("externals")) {
      Take();
      ParseItems([&] { ParseExternalDecl(); });
    }
    if (!ExpectSection("laws")) return Finish(std::move(domain_));
    ParseItems([&] { ParseLawItem(); });
    if (AtSection("costs")) {
      Take();
      ParseItems([&] { ParseCostItem(); });
    }
    if (!At(TokenKind::kEnd)) {
      Report(Peek(), "unexpected " + Describe(Peek()));
    }
    if (diagnostics_.empty()) {
      for (Diagnostic& d : ValidateSignature(domain_)) {
        diagnostics_.push_back(std::move(d));
      }
    }
    return Finish(std::move(domain_));
  }

  ParseResult<PlanningProblem> ParseProblemFile(const DomainDescription& domain) {
    domain_mode_ = false;
    domain_ = domain;
    PlanningProblem problem;
    std::set<std::string> seen;
    while (!At(TokenKind::kEnd)) {
      try {
        if (!At(TokenKind::kSection)) {
          Fail(Peek(), "expected a section keyword, got " + Describe(Peek()));
        }
        const Token section = Take();
        const std::string& name = section.text;
        if (name != "at" && !seen.insert(name).second) {
          Report(section, "duplicate :" + name + " section");
        }
        if (name == "init") {
          problem.init = ParseFormula();
        } else if (name == "goal") {
          problem.goal = ParseFormula();
        } else if (name == "at") {
          TimedConstraint c;
          c.span = section.span;
          if (AtIdent("final")) {
            Take();
          } else {
            c.step = static_cast<int>(ParseInteger());
          }
          c.formula = ParseFormula();
          problem.constraints.push_back(std::move(c));
        } else if (name == "horizon") {
          problem.min_horizon = static_cast<int>(ParseInteger());
          Expect(TokenKind::kDotDot);
          problem.max_horizon = static_cast<int>(ParseInteger());
        } else if (name == "maxcost") {
          problem.max_cost = ParseInteger();
        } else if (name == "noconcurrency") {
          problem.noconcurrency = true;
        } else {
          Fail(section, "unknown section :" + name);
        }
        Expect(TokenKind::kSemicolon);
      } catch (const SyntaxError& e) {
        diagnostics_.push_back(e.diagnostic);
        Resync();
      }
    }
    if (diagnostics_.empty()) {
      for (Diagnostic& d : ValidateProblem(problem, domain_)) {
        if (d.span.file.empty()) d.span.file = file_;
        diagnostics_.push_back(std::move(d));
      }
    }
    return Finish(std::move(problem));
  }

 private:
  template <typename T>
  ParseResult<T> Finish(T value) {
    ParseResult<T> result;
    result.diagnostics = std::move(diagnostics_);
    if (result.diagnostics.empty()) result.value = std::move(value);
    return result;
  }

  // Token access.
  const Token& Peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Token Take() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool At(TokenKind kind) const { return Peek().kind == kind; }
  bool AtIdent(std::string_view text) const {
    return At(TokenKind::kIdent) && Peek().text == text;
  }
  bool AtSection(std::string_view name) const {
    return At(TokenKind::kSection) && Peek().text == name;
  }

  static std::string Describe(const Token& t) {
    if (t.kind == TokenKind::kIdent || t.kind == TokenKind::kInteger) {
      return "'" + t.text + "'";
    }
    if (t.kind == TokenKind::kSection) return "':" + t.text + "'";
    if (t.kind == TokenKind::kError) return "invalid character '" + t.text + "'";
    return internal::TokenKindName(t.kind);
  }

  void Report(const Token& at, std::string message) {
    diagnostics_.push_back(Diagnostic{at.span, std::move(message)});
  }
  [[noreturn]] void Fail(const Token& at, std::string message) {
    throw SyntaxError{Diagnostic{at.span, std::move(message)}};
  }

  Token Expect(TokenKind kind) {
    if (!At(kind)) {
      Fail(Peek(), std::string("expected ") + internal::TokenKindName(kind) +
                       ", got " + Describe(Peek()));
    }
    return Take();
  }
  static bool IsLawKeyword(const Token& t) {
    static const std::set<std::string, std::less<>> kWords = {
        "caused", "causes", "if", "after", "nonexecutable", "constraint",
        "exogenous", "inertial", "vars"};
    return t.kind == TokenKind::kIdent && kWords.count(t.text) > 0;
  }

  std::string ExpectIdent(const char* what) {
    if (!At(TokenKind::kIdent)) {
      Fail(Peek(), std::string("expected ") + what + ", got " + Describe(Peek()));
    }
    return Take().text;
  }
  void ExpectKeyword(std::string_view word) {
    if (!AtIdent(word)) {
      Fail(Peek(), "expected '" + std::string(word) + "', got " +
                       Describe(Peek()));
    }
    Take();
  }
  bool ExpectSection(std::string_view name) {
    if (AtSection(name)) {
      Take();
      return true;
    }
    Report(Peek(), "missing :" + std::string(name) + " section");
    return false;
  }

  std::int64_t ParseInteger() {
    const Token t = Expect(TokenKind::kInteger);
    std::int64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() ||
        value > std::numeric_limits<int>::max()) {
      Fail(t, "integer out of range: " + t.text);
    }
    return value;
  }

  // Skips to just past the next ';', or to the next section keyword.
  void Resync() {
    depth_ = 0;
    while (!At(TokenKind::kEnd) && !At(TokenKind::kSection)) {
      if (Take().kind == TokenKind::kSemicolon) return;
    }
  }

  template <typename Fn>
  void ParseItems(Fn item) {
    while (!At(TokenKind::kEnd) && !At(TokenKind::kSection)) {
      const std::size_t before = pos_;
      try {
        item();
      } catch (const SyntaxError& e) {
        diagnostics_.push_back(e.diagnostic);
        Resync();
      }
      if (pos_ == before) Take();  // guarantees progress
    }
  }

  // Declarations.
  void ParseObjectDecl() {
    std::vector<Token> names;
    names.push_back(Expect(TokenKind::kIdent));
    while (At(TokenKind::kComma) || At(TokenKind::kIdent)) {
      if (At(TokenKind::kComma)) Take();
      names.push_back(Expect(TokenKind::kIdent));
    }
    Expect(TokenKind::kDoubleColon);
    const Token sort_token = Expect(TokenKind::kIdent);
    Expect(TokenKind::kSemicolon);
    Sort* sort = nullptr;
    for (Sort& s : domain_.sorts) {
      if (s.name == sort_token.text) sort = &s;
    }
    if (sort == nullptr) {
      Report(sort_token, "unknown sort '" + sort_token.text + "'");
      return;
    }
    for (const Token& n : names) {
      if (sort->Contains(n.text)) {
        Report(n, "duplicate member '" + n.text + "' in sort '" + sort->name +
                      "'");
        continue;
      }
      sort->members.push_back(n.text);
    }
  }

  void ParseConstantDecl() {
    ConstantDecl decl;
    const Token name = Expect(TokenKind::kIdent);
    decl.name = name.text;
    if (At(TokenKind::kLParen)) {
      Take();
      decl.arg_sorts.push_back(ExpectIdent("a sort"));
      while (At(TokenKind::kComma)) {
        Take();
        decl.arg_sorts.push_back(ExpectIdent("a sort"));
      }
      Expect(TokenKind::kRParen);
    }
    Expect(TokenKind::kDoubleColon);
    const Token kind = Expect(TokenKind::kIdent);
    if (kind.text == "inertialFluent") {
      decl.kind = ConstantKind::kInertialFluent;
    } else if (kind.text == "simpleFluent") {
      decl.kind = ConstantKind::kSimpleFluent;
    } else if (kind.text == "action") {
      decl.kind = ConstantKind::kAction;
    } else {
      Fail(kind, "unknown constant kind '" + kind.text +
                     "' (expected inertialFluent, simpleFluent or action)");
    }
    if (At(TokenKind::kLParen)) {
      Take();
      decl.value_sort = ExpectIdent("a sort");
      Expect(TokenKind::kRParen);
    }
    const Token end = Expect(TokenKind::kSemicolon);
    decl.span = SpanFrom(name, end);
    if (domain_.FindConstant(decl.name, decl.arity()) != nullptr) {
      Report(name, "duplicate constant '" + decl.name + "/" +
                       std::to_string(decl.arity()) + "'");
      return;
    }
    domain_.constants.push_back(std::move(decl));
  }

  void ParseExternalDecl() {
    const Token name = Expect(TokenKind::kIdent);
    Expect(TokenKind::kSlash);
    ExternalDecl decl;
    decl.name = name.text;
    decl.arity = static_cast<int>(ParseInteger());
    const Token end = Expect(TokenKind::kSemicolon);
    decl.span = SpanFrom(name, end);
    domain_.externals.push_back(std::move(decl));
  }

  SourceSpan SpanFrom(const Token& first, const Token& last) const {
    return SourceSpan{file_, first.span.start_line, first.span.start_col,
                      last.span.end_line, last.span.end_col};
  }

  // Laws.
  bool TryParseVars() {
    if (!AtIdent("vars")) return false;
    Take();
    do {
      const std::string var = ExpectIdent("a variable");
      Expect(TokenKind::kDoubleColon);
      const Token sort = Expect(TokenKind::kIdent);
      if (domain_.FindSort(sort.text) == nullptr) {
        Report(sort, "unknown sort '" + sort.text + "'");
      }
      scope_[var] = sort.text;
    } while (At(TokenKind::kIdent));
    Expect(TokenKind::kSemicolon);
    return true;
  }

  std::vector<VarBinding> TakeUsedVars() {
    std::vector<VarBinding> vars;
    for (const std::string& v : used_vars_) {
      auto it = scope_.find(v);
      if (it != scope_.end()) vars.push_back(VarBinding{v, it->second});
    }
    used_vars_.clear();
    return vars;
  }

  void ParseLawItem() {
    if (TryParseVars()) return;
    used_vars_.clear();
    const Token first = Peek();
    CausalLaw law;
    if (AtIdent("caused")) {
      Take();
      law.form = LawForm::kCaused;
      if (AtIdent("false")) {
        Take();
      } else {
        law.head = ParseAtom();
      }
      if (AtIdent("if")) {
        Take();
        law.condition = ParseFormula();
      }
      if (AtIdent("after")) {
        Take();
        law.after = ParseFormula();
      }
    } else if (AtIdent("nonexecutable")) {
      Take();
      law.form = LawForm::kNonexecutable;
      law.action = ParseAtom();
      if (AtIdent("if")) {
        Take();
        law.condition = ParseFormula();
      }
    } else if (AtIdent("constraint")) {
      Take();
      law.form = LawForm::kConstraint;
      law.condition = ParseFormula();
    } else if (AtIdent("inertial") || AtIdent("exogenous")) {
      law.form =
          Take().text == "inertial" ? LawForm::kInertial : LawForm::kExogenous;
      law.constant = ExpectIdent("a constant name");
    } else if (At(TokenKind::kIdent) && domain_.HasConstantNamed(Peek().text)) {
      law.form = LawForm::kCauses;
      law.action = ParseAtom();
      ExpectKeyword("causes");
      law.head = ParseAtom();
      if (AtIdent("if")) {
        Take();
        law.condition = ParseFormula();
      }
    } else {
      Fail(Peek(), "expected a causal law, got " + Describe(Peek()));
    }
    const Token end = Expect(TokenKind::kSemicolon);
    law.span = SpanFrom(first, end);
    law.vars = TakeUsedVars();
    domain_.laws.push_back(std::move(law));
  }

  void ParseCostItem() {
    if (TryParseVars()) return;
    used_vars_.clear();
    const Token first = Peek();
    CostBinding cost;
    cost.action = ParseAtomNoValue();
    Expect(TokenKind::kEquals);
    Expect(TokenKind::kAt);
    cost.external = ExpectIdent("an external name");
    Expect(TokenKind::kLParen);
    if (!At(TokenKind::kRParen)) {
      cost.args.push_back(ParseCostArg());
      while (At(TokenKind::kComma)) {
        Take();
        cost.args.push_back(ParseCostArg());
      }
    }
    Expect(TokenKind::kRParen);
    const Token end = Expect(TokenKind::kSemicolon);
    cost.span = SpanFrom(first, end);
    cost.vars = TakeUsedVars();
    domain_.costs.push_back(std::move(cost));
  }

  CostArg ParseCostArg() {
    CostArg arg;
    if (At(TokenKind::kIdent) && domain_.HasConstantNamed(Peek().text) &&
        !scope_.contains(Peek().text)) {
      arg.fluent = Take().text;
      if (At(TokenKind::kLParen)) arg.fluent_args = ParseTermList();
      return arg;
    }
    arg.term = ParseTerm();
    return arg;
  }

  // Formulas.
  Formula ParseFormula() {
    std::vector<Formula> parts;
    parts.push_back(ParseConjunction());
    while (At(TokenKind::kPipe)) {
      Take();
      parts.push_back(ParseConjunction());
    }
    return Formula::Or(std::move(parts));
  }

  Formula ParseConjunction() {
    std::vector<Formula> parts;
    parts.push_back(ParseUnary());
    while (At(TokenKind::kAmp)) {
      Take();
      parts.push_back(ParseUnary());
    }
    return Formula::And(std::move(parts));
  }

  Formula ParseUnary() {
    if (At(TokenKind::kTilde)) {
      Nest();
      Take();
      Formula inner = ParseUnary();
      --depth_;
      return Formula::Not(std::move(inner));
    }
    return ParsePrimary();
  }

  void Nest() {
    if (++depth_ > kMaxNesting) Fail(Peek(), "formula nested too deeply");
  }

  Formula ParsePrimary() {
    if (At(TokenKind::kLParen)) {
      Nest();
      Take();
      Formula inner = ParseFormula();
      Expect(TokenKind::kRParen);
      --depth_;
      return inner;
    }
    if (AtIdent("true")) {
      Take();
      return Formula::True();
    }
    if (AtIdent("false")) {
      Take();
      return Formula::False();
    }
    if (At(TokenKind::kAt)) {
      const Token at = Take();
      ExternalCall call;
      call.name = ExpectIdent("an external name");
      if (At(TokenKind::kLParen)) call.args = ParseTermList();
      call.span = SpanFrom(at, tokens_[pos_ - 1]);
      return Formula::External(std::move(call));
    }
    if (!At(TokenKind::kIdent)) {
      Fail(Peek(), "expected a formula, got " + Describe(Peek()));
    }
    if (domain_.HasConstantNamed(Peek().text) && !scope_.contains(Peek().text)) {
      return Formula::FromAtom(ParseAtom());
    }
    const Token first = Peek();
    TermComparison cmp;
    cmp.lhs = ParseTerm();
    if (At(TokenKind::kEquals)) {
      cmp.equal = true;
    } else if (At(TokenKind::kNotEquals)) {
      cmp.equal = false;
    } else {
      Fail(first, "unknown constant '" + first.text + "'");
    }
    Take();
    cmp.rhs = ParseTerm();
    cmp.span = SpanFrom(first, tokens_[pos_ - 1]);
    return Formula::Compare(std::move(cmp));
  }

  Atom ParseAtomNoValue() {
    const Token name = Peek();
    if (!At(TokenKind::kIdent) || !domain_.HasConstantNamed(name.text)) {
      Fail(name, At(TokenKind::kIdent)
                     ? "unknown constant '" + name.text + "'"
                     : "expected an atom, got " + Describe(name));
    }
    Take();
    Atom atom;
    atom.constant = name.text;
    if (At(TokenKind::kLParen)) atom.args = ParseTermList();
    atom.span = SpanFrom(name, tokens_[pos_ - 1]);
    return atom;
  }

  Atom ParseAtom() {
    Atom atom = ParseAtomNoValue();
    if (At(TokenKind::kEquals)) {
      Take();
      if (AtIdent("true") || AtIdent("false")) {
        atom.value = Term::Object(Take().text);
      } else {
        atom.value = ParseTerm();
      }
      atom.span.end_line = tokens_[pos_ - 1].span.end_line;
      atom.span.end_col = tokens_[pos_ - 1].span.end_col;
    }
    return atom;
  }

  std::vector<Term> ParseTermList() {
    Expect(TokenKind::kLParen);
    std::vector<Term> terms;
    if (!At(TokenKind::kRParen)) {
      terms.push_back(ParseTerm());
      while (At(TokenKind::kComma)) {
        Take();
        terms.push_back(ParseTerm());
      }
    }
    Expect(TokenKind::kRParen);
    return terms;
  }

  // In domain files a name is a variable if one is in scope, else an object
  // if one is declared, else an (undeclared) variable. In problem files every
  // name is an object.
  Term ParseTerm() {
    if (IsLawKeyword(Peek())) Fail(Peek(), "expected a term, got keyword '" + Peek().text + "'");
    const std::string name = ExpectIdent("a term");
    if (!domain_mode_) return Term::Object(name);
    if (scope_.contains(name)) {
      used_vars_.insert(name);
      return Term::Variable(name);
    }
    if (domain_.IsObject(name)) return Term::Object(name);
    used_vars_.insert(name);
    return Term::Variable(name);
  }

  std::string file_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  static constexpr int kMaxNesting = 200;
  int depth_ = 0;
  bool domain_mode_ = true;
  DomainDescription domain_;
  std::map<std::string, std::string> scope_;
  std::set<std::string> used_vars_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

ParseResult<DomainDescription> ParseDomain(std::string_view text,
                                           std::string file) {
  return Parser(text, std::move(file)).ParseDomainFile();
}

ParseResult<PlanningProblem> ParseProblem(std::string_view text,
                                          const DomainDescription& domain,
                                          std::string file) {
  return Parser(text, std::move(file)).ParseProblemFile(domain);
}

}  // namespace causalplan
