#include "starflow/parse.hpp"

#include <cctype>

namespace starflow {

namespace {

struct Token {
  enum class Kind { number, ident, plus, minus, star, caret, slash, lparen, rparen, end };
  Kind kind;
  std::string text;
  size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    size_t start = i_;
    if (i_ >= text_.size()) {
      tok_ = {Token::Kind::end, "", start};
      return;
    }
    char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      if (j < text_.size() && text_[j] == '.') {
        ++j;
        if (j >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[j])))
          throw ParseError("digits expected after decimal point", j);
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      }
      tok_ = {Token::Kind::number, text_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      tok_ = {Token::Kind::ident, text_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    ++i_;
    switch (c) {
      case '+': tok_ = {Token::Kind::plus, "+", start}; return;
      case '-': tok_ = {Token::Kind::minus, "-", start}; return;
      case '*': tok_ = {Token::Kind::star, "*", start}; return;
      case '^': tok_ = {Token::Kind::caret, "^", start}; return;
      case '/': tok_ = {Token::Kind::slash, "/", start}; return;
      case '(': tok_ = {Token::Kind::lparen, "(", start}; return;
      case ')': tok_ = {Token::Kind::rparen, ")", start}; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  const std::string& text_;
  size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, FrameId frame, Backend backend, int order)
      : lex_(text), frame_(frame), backend_(backend), order_(order) {}

  FormalSeries parse() {
    FormalSeries e = expr();
    if (lex_.peek().kind != Token::Kind::end)
      throw ParseError("unexpected trailing input '" + lex_.peek().text + "'",
                       lex_.peek().pos);
    return e;
  }

 private:
  FormalSeries expr() {
    bool negate = false;
    if (lex_.peek().kind == Token::Kind::minus) {
      lex_.take();
      negate = true;
    }
    FormalSeries acc = term();
    if (negate) acc = -acc;
    while (lex_.peek().kind == Token::Kind::plus ||
           lex_.peek().kind == Token::Kind::minus) {
      Token op = lex_.take();
      FormalSeries t = term();
      if (op.kind == Token::Kind::plus)
        acc += t;
      else
        acc -= t;
    }
    return acc;
  }

  FormalSeries term() {
    FormalSeries acc = factor();
    while (lex_.peek().kind == Token::Kind::star) {
      lex_.take();
      acc = acc * factor();
    }
    return acc;
  }

  FormalSeries factor() {
    FormalSeries b = base();
    if (lex_.peek().kind == Token::Kind::caret) {
      lex_.take();
      Token t = lex_.peek();
      unsigned n = natural("exponent");
      if (n > 64)
        throw ParseError("exponent " + std::to_string(n) + " exceeds 64", t.pos);
      b = b.pow(n);
    }
    return b;
  }

  unsigned natural(const std::string& what) {
    Token t = lex_.peek();
    if (t.kind != Token::Kind::number || t.text.find('.') != std::string::npos)
      throw ParseError(what + " must be a natural number", t.pos);
    lex_.take();
    unsigned long v = std::stoul(t.text);
    return static_cast<unsigned>(v);
  }

  FormalSeries base() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Token::Kind::lparen: {
        lex_.take();
        FormalSeries e = expr();
        if (lex_.peek().kind != Token::Kind::rparen)
          throw ParseError("expected ')'", lex_.peek().pos);
        lex_.take();
        return e;
      }
      case Token::Kind::number: {
        lex_.take();
        Scalar num = scalar_of_number(t);
        if (lex_.peek().kind == Token::Kind::slash) {
          lex_.take();
          Token d = lex_.peek();
          if (t.text.find('.') != std::string::npos)
            throw ParseError("rational numerator must be an integer", t.pos);
          unsigned den = natural("denominator");
          if (den == 0) throw ParseError("zero denominator", d.pos);
          num /= Scalar::integer(static_cast<long>(den), backend_);
        }
        return FormalSeries::constant(frame_, num, order_);
      }
      case Token::Kind::ident: {
        lex_.take();
        if (t.text == "i")
          return FormalSeries::constant(frame_, Scalar::imaginary_unit(backend_), order_);
        if (t.text == "hbar") return FormalSeries::hbar(frame_, backend_, order_);
        const auto& vars = frame_vars(frame_);
        for (int k = 0; k < kDim; ++k)
          if (vars[k] == t.text)
            return FormalSeries::variable(frame_, k, backend_, order_);
        if (auto ref = resolve_variable(t.text))
          throw ParseError("variable '" + t.text + "' belongs to frame " +
                               frame_name(ref->frame) + ", not " + frame_name(frame_),
                           t.pos);
        throw ParseError("unknown variable '" + t.text + "'", t.pos);
      }
      case Token::Kind::end:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  Scalar scalar_of_number(const Token& t) {
    size_t dot = t.text.find('.');
    if (backend_ == Backend::float64) return Scalar::real_double(std::stod(t.text));
    if (dot == std::string::npos) return Scalar::rational(mpq_class(t.text, 10));
    std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
    size_t frac_len = t.text.size() - dot - 1;
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar::rational(q);
  }

  Lexer lex_;
  FrameId frame_;
  Backend backend_;
  int order_;
};

}  // namespace

FormalSeries parse_expression(const std::string& text, FrameId frame, Backend backend,
                              int order) {
  return Parser(text, frame, backend, order).parse();
}

std::optional<FrameId> detect_frame(const std::string& text) {
  size_t i = 0;
  while (i < text.size()) {
    if (std::isalpha(static_cast<unsigned char>(text[i]))) {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string name = text.substr(i, j - i);
      if (name != "i" && name != "hbar") {
        if (auto ref = resolve_variable(name)) return ref->frame;
      }
      i = j;
    } else {
      ++i;
    }
  }
  return std::nullopt;
}

}  // namespace starflow
