#include <cctype>

#include "dbagg/folang.hpp"

namespace dbagg {

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Dot, Semicolon, Eq, Neq, Arrow, Turnstile, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "", i_});
        return out;
      }
      const std::size_t start = i_;
      const char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) ++i_;
        out.push_back({Tok::Ident, std::string(src_.substr(start, i_ - start)), start});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) ++i_;
        out.push_back({Tok::Number, std::string(src_.substr(start, i_ - start)), start});
      } else if (c == '"' || c == '\'') {
        out.push_back({Tok::String, read_string(c), start});
      } else if (c == '(') {
        ++i_, out.push_back({Tok::LParen, "(", start});
      } else if (c == ')') {
        ++i_, out.push_back({Tok::RParen, ")", start});
      } else if (c == ',') {
        ++i_, out.push_back({Tok::Comma, ",", start});
      } else if (c == '.') {
        ++i_, out.push_back({Tok::Dot, ".", start});
      } else if (c == ';') {
        ++i_, out.push_back({Tok::Semicolon, ";", start});
      } else if (c == '=') {
        ++i_, out.push_back({Tok::Eq, "=", start});
      } else if (c == '!' && peek(1) == '=') {
        i_ += 2, out.push_back({Tok::Neq, "!=", start});
      } else if (c == '-' && peek(1) == '>') {
        i_ += 2, out.push_back({Tok::Arrow, "->", start});
      } else if (c == ':' && peek(1) == '-') {
        i_ += 2, out.push_back({Tok::Turnstile, ":-", start});
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", start);
      }
    }
  }

 private:
  char peek(std::size_t k) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  std::string read_string(char quote) {
    const std::size_t start = i_;
    ++i_;
    std::string out;
    while (i_ < src_.size() && src_[i_] != quote) {
      if (src_[i_] == '\\' && i_ + 1 < src_.size()) ++i_;
      out += src_[i_++];
    }
    if (i_ >= src_.size()) throw ParseError("unterminated string literal", start);
    ++i_;
    return out;
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "and" || s == "or" || s == "not" || s == "null" ||
         s == "consts";
}

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options)
      : toks_(Lexer(text).run()), options_(options), consts_(options.consts) {}

  Formula formula_document() {
    header();
    Formula f = formula();
    expect(Tok::End, "end of input");
    return rename_apart(f);
  }

  Query query_document() {
    header();
    const Token& name = expect(Tok::Ident, "query head");
    if (is_keyword(name.text)) throw ParseError("expected query head", name.pos);
    expect(Tok::LParen, "'('");
    std::vector<std::string> head;
    std::vector<std::size_t> head_pos;
    if (cur().kind != Tok::RParen) {
      while (true) {
        const Token& v = expect(Tok::Ident, "head variable");
        if (is_keyword(v.text) || consts_.count(v.text) ||
            !std::islower(static_cast<unsigned char>(v.text[0]))) {
          throw ParseError("head entries must be variables", v.pos);
        }
        head.push_back(v.text);
        head_pos.push_back(v.pos);
        if (cur().kind != Tok::Comma) break;
        advance();
      }
    }
    expect(Tok::RParen, "')'");
    const std::size_t body_pos = expect(Tok::Turnstile, "':-'").pos;
    Formula body = formula();
    expect(Tok::End, "end of input");
    // Head variables are free in the body, so renaming never touches them.
    body = rename_apart(body);
    try {
      return make_query(head, body);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), body_pos);
    }
  }

 private:
  const Token& cur() const { return toks_[k_]; }
  const Token& advance() { return toks_[k_++]; }

  const Token& expect(Tok kind, const char* what) {
    if (cur().kind != kind) {
      throw ParseError(std::string("expected ") + what + " but found " +
                           (cur().kind == Tok::End ? std::string("end of input") : "'" + cur().text + "'"),
                       cur().pos);
    }
    return advance();
  }

  bool at_word(const char* word) const { return cur().kind == Tok::Ident && cur().text == word; }

  void header() {
    if (!at_word("consts")) return;
    advance();
    while (true) {
      const Token& t = cur();
      if (t.kind == Tok::Ident || t.kind == Tok::String || t.kind == Tok::Number) {
        if (t.kind == Tok::Ident && is_keyword(t.text)) throw ParseError("keyword used as constant", t.pos);
        consts_.insert(t.text);
        advance();
      } else {
        throw ParseError("expected constant name", t.pos);
      }
      if (cur().kind != Tok::Comma) break;
      advance();
    }
    expect(Tok::Semicolon, "';' after consts header");
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (cur().kind == Tok::Arrow) {
      advance();
      return implies(lhs, formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at_word("or")) {
      advance();
      f = disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at_word("and")) {
      advance();
      f = conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    if (at_word("not")) {
      advance();
      return negation(unary());
    }
    if (at_word("forall") || at_word("exists")) {
      const bool universal = cur().text == "forall";
      advance();
      std::vector<std::string> vars;
      while (true) {
        const Token& v = expect(Tok::Ident, "bound variable");
        if (is_keyword(v.text) || consts_.count(v.text) ||
            !std::islower(static_cast<unsigned char>(v.text[0]))) {
          throw ParseError("'" + v.text + "' cannot be bound", v.pos);
        }
        vars.push_back(v.text);
        if (cur().kind != Tok::Comma) break;
        advance();
      }
      expect(Tok::Dot, "'.' after quantifier");
      Formula body = formula();
      return universal ? forall(vars, body) : exists(vars, body);
    }
    return primary();
  }

  Formula primary() {
    if (cur().kind == Tok::LParen) {
      advance();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (cur().kind == Tok::Ident && !is_keyword(cur().text) && toks_[k_ + 1].kind == Tok::LParen) {
      return atom_formula();
    }
    Term lhs = term();
    if (cur().kind == Tok::Eq) {
      advance();
      return eq(lhs, term());
    }
    if (cur().kind == Tok::Neq) {
      advance();
      return neq(lhs, term());
    }
    throw ParseError("expected '=' or '!=' after term", cur().pos);
  }

  Formula atom_formula() {
    const Token& name = advance();
    advance();  // '('
    std::vector<Term> args;
    if (cur().kind != Tok::RParen) {
      while (true) {
        args.push_back(term());
        if (cur().kind != Tok::Comma) break;
        advance();
      }
    }
    expect(Tok::RParen, "')'");
    if (options_.schema) {
      if (!options_.schema->contains(name.text)) {
        throw ParseError("unknown relation symbol '" + name.text + "'", name.pos);
      }
      const std::size_t arity = options_.schema->arity(name.text);
      if (arity != args.size()) {
        throw ParseError("relation " + name.text + " expects " + std::to_string(arity) +
                             " arguments, got " + std::to_string(args.size()),
                         name.pos);
      }
    } else {
      auto [it, inserted] = seen_arity_.emplace(name.text, args.size());
      if (!inserted && it->second != args.size()) {
        throw ParseError("relation " + name.text + " used with inconsistent arity", name.pos);
      }
    }
    if (args.empty()) throw ParseError("relation atoms need at least one argument", name.pos);
    return atom(name.text, std::move(args));
  }

  Term term() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::String:
      case Tok::Number:
        advance();
        return Term::constant(t.text);
      case Tok::Ident:
        if (t.text == "null") {
          advance();
          return Term::constant(Value::null());
        }
        if (is_keyword(t.text)) throw ParseError("unexpected keyword '" + t.text + "'", t.pos);
        advance();
        if (consts_.count(t.text)) return Term::constant(t.text);
        if (!std::islower(static_cast<unsigned char>(t.text[0]))) {
          throw ParseError("'" + t.text + "' is neither a variable nor a declared constant", t.pos);
        }
        return Term::var(t.text);
      default:
        throw ParseError("expected a term", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
  const ParseOptions& options_;
  std::set<std::string> consts_;
  std::map<std::string, std::size_t> seen_arity_;
};

}  // namespace

Formula parse_formula(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).formula_document();
}

Formula parse_formula(std::string_view text, const Schema& schema) {
  ParseOptions options;
  options.schema = schema;
  return parse_formula(text, options);
}

Query parse_query(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).query_document();
}

Query parse_query(std::string_view text, const Schema& schema) {
  ParseOptions options;
  options.schema = schema;
  return parse_query(text, options);
}

}  // namespace dbagg
