#include "bditb/agentlang.hpp"

#include <cctype>
#include <optional>

namespace bditb::agentlang {

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.functor <=> b.functor; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

std::string Term::to_string() const {
  if (args.empty()) return functor;
  std::string out = functor + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].to_string();
  }
  return out + ")";
}

std::string TriggerEvent::to_string() const {
  switch (kind) {
    case TriggerKind::add_goal: return "+!" + payload.to_string();
    case TriggerKind::add_belief: return "+" + payload.to_string();
    case TriggerKind::del_belief: return "-" + payload.to_string();
  }
  return {};
}

std::string BodyStep::to_string() const {
  switch (kind) {
    case StepKind::achieve_goal: return "!" + payload.to_string();
    case StepKind::add_belief: return "+" + payload.to_string();
    case StepKind::del_belief: return "-" + payload.to_string();
    case StepKind::send:
      return ".send(" + recipient + "," +
             (performative == Performative::tell ? "tell" : "achieve") + "," +
             payload.to_string() + ")";
    case StepKind::wait: return ".wait(" + payload.to_string() + ")";
    case StepKind::external_action: return payload.to_string();
  }
  return {};
}

SyntaxError::SyntaxError(int line, int column, std::string expected, std::string detail)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + detail +
            (expected.empty() ? "" : " (expected " + expected + ")")),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  ident,      // lowercase-initial identifier
  internal,   // `.name`
  dot,        // clause terminator
  comma,
  lparen,
  rparen,
  colon,
  arrow,      // <-
  bang,
  plus,
  minus,
  semicolon,
  amp,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::internal: return "internal action";
    case Tok::dot: return "'.'";
    case Tok::comma: return "','";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::colon: return "':'";
    case Tok::arrow: return "'<-'";
    case Tok::bang: return "'!'";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::semicolon: return "';'";
    case Tok::amp: return "'&'";
    case Tok::end: return "end of input";
  }
  return "?";
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const int l0 = line, c0 = col;
      advance(2);
      while (i < src.size() && !(src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/'))
        advance(1);
      if (i >= src.size()) throw SyntaxError(l0, c0, "'*/'", "unterminated block comment");
      advance(2);
      continue;
    }
    const int l0 = line, c0 = col;
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l0, c0});
      advance(j - i);
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      throw SyntaxError(l0, c0, "lowercase identifier", "variables are not supported");
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      throw SyntaxError(l0, c0, "lowercase identifier", "numeric terms are not supported");
    }
    if (c == '.') {
      if (i + 1 < src.size() && std::islower(static_cast<unsigned char>(src[i + 1]))) {
        std::size_t j = i + 1;
        while (j < src.size() && ident_char(src[j])) ++j;
        out.push_back({Tok::internal, std::string(src.substr(i + 1, j - i - 1)), l0, c0});
        advance(j - i);
      } else {
        out.push_back({Tok::dot, ".", l0, c0});
        advance(1);
      }
      continue;
    }
    if (c == '<' && i + 1 < src.size() && src[i + 1] == '-') {
      out.push_back({Tok::arrow, "<-", l0, c0});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case ',': k = Tok::comma; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case ':': k = Tok::colon; break;
      case '!': k = Tok::bang; break;
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case ';': k = Tok::semicolon; break;
      case '&': k = Tok::amp; break;
      case '?': throw SyntaxError(l0, c0, "", "test goals are not supported");
      case '@': throw SyntaxError(l0, c0, "", "plan labels are not supported");
      case '[': throw SyntaxError(l0, c0, "", "annotations are not supported");
      case '{': throw SyntaxError(l0, c0, "", "directives are not supported");
      default:
        throw SyntaxError(l0, c0, "", std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), l0, c0});
    advance(1);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  AgentProgram program(std::string name) {
    AgentProgram prog;
    prog.name = std::move(name);
    while (peek().kind != Tok::end) {
      const Token& t = peek();
      if (t.kind == Tok::bang) {
        next();
        prog.initial_goals.push_back(term());
        expect(Tok::dot, "initial goal");
      } else if (t.kind == Tok::plus || t.kind == Tok::minus) {
        Plan p = plan();
        p.id = prog.plans.size();
        prog.plans.push_back(std::move(p));
      } else if (t.kind == Tok::ident) {
        prog.initial_beliefs.push_back(term());
        expect(Tok::dot, "initial belief");
      } else {
        fail(t, "belief, '!goal' or plan", "unexpected " + std::string(describe(t.kind)));
      }
    }
    return prog;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& expected, const std::string& what) {
    throw SyntaxError(t.line, t.column, expected, what);
  }

  void expect(Tok k, const char* where) {
    const Token& t = peek();
    if (t.kind != k) {
      fail(t, describe(k), std::string("unexpected ") + describe(t.kind) + " in " + where);
    }
    next();
  }

  Term term() {
    const Token& t = peek();
    if (t.kind != Tok::ident) fail(t, "identifier", std::string("unexpected ") + describe(t.kind));
    Term out(next().text);
    if (peek().kind == Tok::lparen) {
      next();
      out.args.push_back(term());
      while (peek().kind == Tok::comma) {
        next();
        out.args.push_back(term());
      }
      expect(Tok::rparen, "term arguments");
    }
    return out;
  }

  Plan plan() {
    const Token& head = next();
    Plan p;
    p.source_line = head.line;
    const int head_col = head.column;
    if (head.kind == Tok::plus) {
      if (peek().kind == Tok::bang) {
        next();
        p.trigger.kind = TriggerKind::add_goal;
      } else {
        p.trigger.kind = TriggerKind::add_belief;
      }
    } else {
      if (peek().kind == Tok::bang) {
        fail(peek(), "belief", "goal deletion triggers are not supported");
      }
      p.trigger.kind = TriggerKind::del_belief;
    }
    p.trigger.payload = term();

    auto unterminated = [&](const Token& at) {
      throw SyntaxError(p.source_line, head_col, "';' or '.'",
                        "unterminated plan body starting at line " +
                            std::to_string(p.source_line) + ", found " + describe(at.kind) +
                            " at " + std::to_string(at.line) + ":" + std::to_string(at.column));
    };

    if (peek().kind == Tok::colon) {
      next();
      p.context = context();
    }
    if (peek().kind == Tok::arrow) {
      next();
      if (peek().kind == Tok::ident && peek().text == "true" &&
          (toks_[pos_ + 1].kind == Tok::dot || toks_[pos_ + 1].kind == Tok::end)) {
        next();
      } else {
        try {
          p.body.push_back(step());
          while (peek().kind == Tok::semicolon) {
            next();
            p.body.push_back(step());
          }
        } catch (const SyntaxError&) {
          if (peek().kind == Tok::end) unterminated(peek());
          throw;
        }
      }
    }
    if (peek().kind != Tok::dot) unterminated(peek());
    next();
    return p;
  }

  Context context() {
    Context ctx;
    if (peek().kind == Tok::ident && peek().text == "true" &&
        toks_[pos_ + 1].kind != Tok::lparen) {
      next();
      return ctx;
    }
    ctx.literals.push_back(literal());
    while (peek().kind == Tok::amp) {
      next();
      ctx.literals.push_back(literal());
    }
    return ctx;
  }

  Literal literal() {
    Literal lit;
    if (peek().kind == Tok::ident && peek().text == "not" &&
        toks_[pos_ + 1].kind == Tok::ident) {
      next();
      lit.negated = true;
    }
    lit.term = term();
    return lit;
  }

  BodyStep step() {
    BodyStep s;
    const Token& t = peek();
    switch (t.kind) {
      case Tok::bang:
        next();
        s.kind = StepKind::achieve_goal;
        s.payload = term();
        return s;
      case Tok::plus:
        next();
        s.kind = StepKind::add_belief;
        s.payload = term();
        return s;
      case Tok::minus:
        next();
        s.kind = StepKind::del_belief;
        s.payload = term();
        return s;
      case Tok::internal: {
        const Token& act = next();
        if (act.text == "send") {
          s.kind = StepKind::send;
          expect(Tok::lparen, ".send");
          const Token& to = peek();
          if (to.kind != Tok::ident) fail(to, "agent name", "bad .send recipient");
          s.recipient = next().text;
          expect(Tok::comma, ".send");
          const Token& perf = peek();
          if (perf.kind != Tok::ident || (perf.text != "tell" && perf.text != "achieve")) {
            fail(perf, "'tell' or 'achieve'", "unsupported performative");
          }
          s.performative = next().text == "tell" ? Performative::tell : Performative::achieve;
          expect(Tok::comma, ".send");
          s.payload = term();
          expect(Tok::rparen, ".send");
          return s;
        }
        if (act.text == "wait") {
          s.kind = StepKind::wait;
          expect(Tok::lparen, ".wait");
          s.payload = term();
          expect(Tok::rparen, ".wait");
          return s;
        }
        fail(act, "'.send' or '.wait'", "unknown internal action '." + act.text + "'");
      }
      case Tok::ident:
        s.kind = StepKind::external_action;
        s.payload = term();
        return s;
      default:
        fail(t, "body step", std::string("unexpected ") + describe(t.kind));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

AgentProgram parse_agent(std::string_view source, std::string name) {
  Parser p(tokenize(source));
  return p.program(std::move(name));
}

std::string unparse(const AgentProgram& program) {
  std::string out;
  if (!program.name.empty()) out += "// Agent " + program.name + "\n";
  for (const auto& b : program.initial_beliefs) out += b.to_string() + ".\n";
  for (const auto& g : program.initial_goals) out += "!" + g.to_string() + ".\n";
  for (const auto& p : program.plans) {
    out += p.trigger.to_string() + " : ";
    if (p.context.literals.empty()) {
      out += "true";
    } else {
      for (std::size_t i = 0; i < p.context.literals.size(); ++i) {
        if (i) out += " & ";
        if (p.context.literals[i].negated) out += "not ";
        out += p.context.literals[i].term.to_string();
      }
    }
    out += " <- ";
    if (p.body.empty()) {
      out += "true";
    } else {
      for (std::size_t i = 0; i < p.body.size(); ++i) {
        if (i) out += "; ";
        out += p.body[i].to_string();
      }
    }
    out += ".\n";
  }
  return out;
}

}  // namespace bditb::agentlang
