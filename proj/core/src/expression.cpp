#include "toravg/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "detail/grid_numerics.hpp"
#include "toravg/errors.hpp"

namespace toravg {

double Expression::eval(const Env& env) const {
  switch (kind_) {
    case Kind::Number: return number_;
    case Kind::Pi: return std::numbers::pi;
    case Kind::Eps: return env.eps;
    case Kind::Angle: return env.theta[axis_];
    case Kind::Action: return env.action[axis_];
    case Kind::Neg: return -lhs_->eval(env);
    case Kind::Add: return lhs_->eval(env) + rhs_->eval(env);
    case Kind::Sub: return lhs_->eval(env) - rhs_->eval(env);
    case Kind::Mul: return lhs_->eval(env) * rhs_->eval(env);
    case Kind::Div: return lhs_->eval(env) / rhs_->eval(env);
    case Kind::Pow: return std::pow(lhs_->eval(env), rhs_->eval(env));
    case Kind::Sin: return std::sin(lhs_->eval(env));
    case Kind::Cos: return std::cos(lhs_->eval(env));
    case Kind::Exp: return std::exp(lhs_->eval(env));
  }
  return 0.0;
}

bool Expression::depends_on_eps() const {
  if (kind_ == Kind::Eps) return true;
  if (lhs_ && lhs_->depends_on_eps()) return true;
  if (rhs_ && rhs_->depends_on_eps()) return true;
  return false;
}

Expression::Ptr Expression::leaf(Kind kind, double number, int axis) {
  auto e = std::shared_ptr<Expression>(new Expression());
  e->kind_ = kind;
  e->number_ = number;
  e->axis_ = axis;
  return e;
}

Expression::Ptr Expression::unary(Kind kind, Ptr operand) {
  auto e = std::shared_ptr<Expression>(new Expression());
  e->kind_ = kind;
  e->lhs_ = std::move(operand);
  return e;
}

Expression::Ptr Expression::binary(Kind kind, Ptr lhs, Ptr rhs) {
  auto e = std::shared_ptr<Expression>(new Expression());
  e->kind_ = kind;
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok type = Tok::End;
  double number = 0.0;
  std::string ident;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\r' || text_[pos_] == '\n')) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    current_ = Token{};
    current_.line = line_;
    current_.column = col_;
    if (pos_ >= text_.size()) {
      current_.type = Tok::End;
      return;
    }

    const char c = text_[pos_];
    switch (c) {
      case '+': current_.type = Tok::Plus; consume(1); return;
      case '-': current_.type = Tok::Minus; consume(1); return;
      case '*': current_.type = Tok::Star; consume(1); return;
      case '/': current_.type = Tok::Slash; consume(1); return;
      case '^': current_.type = Tok::Caret; consume(1); return;
      case '(': current_.type = Tok::LParen; consume(1); return;
      case ')': current_.type = Tok::RParen; consume(1); return;
      default: break;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
        ++end;
      if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
        std::size_t exp = end + 1;
        if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
        if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
          ++exp;
          while (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp])))
            ++exp;
          end = exp;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(text_.data() + pos_, text_.data() + end, value);
      if (res.ec != std::errc{} || res.ptr != text_.data() + end)
        throw ParseError("malformed number", line_, col_);
      current_.type = Tok::Number;
      current_.number = value;
      consume(end - pos_);
      return;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      current_.type = Tok::Ident;
      current_.ident = std::string(text_.substr(pos_, end - pos_));
      consume(end - pos_);
      return;
    }

    std::ostringstream os;
    os << "unexpected character '" << c << "'";
    throw ParseError(os.str(), line_, col_);
  }

  void consume(std::size_t n) {
    pos_ += n;
    col_ += static_cast<int>(n);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(std::string_view text, int dim) : lex_(text), dim_(dim) {}

  Expression::Ptr parse() {
    Expression::Ptr e = parse_expr();
    const Token& t = lex_.peek();
    if (t.type != Tok::End)
      throw ParseError("unexpected trailing input", t.line, t.column);
    return e;
  }

 private:
  Expression::Ptr parse_expr() {
    Expression::Ptr e = parse_term();
    while (lex_.peek().type == Tok::Plus || lex_.peek().type == Tok::Minus) {
      const Tok op = lex_.take().type;
      Expression::Ptr r = parse_term();
      e = Expression::binary(op == Tok::Plus ? Expression::Kind::Add
                                             : Expression::Kind::Sub,
                             std::move(e), std::move(r));
    }
    return e;
  }

  Expression::Ptr parse_term() {
    Expression::Ptr e = parse_unary();
    while (lex_.peek().type == Tok::Star || lex_.peek().type == Tok::Slash) {
      const Tok op = lex_.take().type;
      Expression::Ptr r = parse_unary();
      e = Expression::binary(op == Tok::Star ? Expression::Kind::Mul
                                             : Expression::Kind::Div,
                             std::move(e), std::move(r));
    }
    return e;
  }

  Expression::Ptr parse_unary() {
    if (lex_.peek().type == Tok::Minus) {
      lex_.take();
      return Expression::unary(Expression::Kind::Neg, parse_unary());
    }
    return parse_power();
  }

  Expression::Ptr parse_power() {
    Expression::Ptr base = parse_primary();
    if (lex_.peek().type == Tok::Caret) {
      lex_.take();
      // Right-associative; the exponent may carry a unary minus.
      return Expression::binary(Expression::Kind::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  Expression::Ptr parse_primary() {
    const Token t = lex_.take();
    switch (t.type) {
      case Tok::Number:
        return Expression::leaf(Expression::Kind::Number, t.number);
      case Tok::LParen: {
        Expression::Ptr e = parse_expr();
        expect_rparen();
        return e;
      }
      case Tok::Ident:
        return identifier(t);
      default:
        throw ParseError("expected expression", t.line, t.column);
    }
  }

  Expression::Ptr identifier(const Token& t) {
    const std::string& name = t.ident;
    if (name == "pi") return Expression::leaf(Expression::Kind::Pi);
    if (name == "eps") return Expression::leaf(Expression::Kind::Eps);
    if (name == "sin" || name == "cos" || name == "exp") {
      const Token open = lex_.take();
      if (open.type != Tok::LParen)
        throw ParseError("expected '(' after function name", open.line, open.column);
      Expression::Ptr arg = parse_expr();
      expect_rparen();
      const Expression::Kind kind = (name == "sin")   ? Expression::Kind::Sin
                                    : (name == "cos") ? Expression::Kind::Cos
                                                      : Expression::Kind::Exp;
      return Expression::unary(kind, std::move(arg));
    }

    auto coordinate = [&](std::size_t prefix_len,
                          Expression::Kind kind) -> Expression::Ptr {
      const std::string_view digits = std::string_view(name).substr(prefix_len);
      if (digits.empty()) return nullptr;
      int axis = 0;
      const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), axis);
      if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) return nullptr;
      if (axis < 1 || axis > dim_) {
        std::ostringstream os;
        os << "unknown identifier '" << name << "' (axis out of range for d = " << dim_
           << ")";
        throw ParseError(os.str(), t.line, t.column);
      }
      return Expression::leaf(kind, 0.0, axis - 1);
    };

    if (name.size() >= 3 && name.compare(0, 2, "th") == 0) {
      if (auto e = coordinate(2, Expression::Kind::Angle)) return e;
    }
    if (name.size() >= 2 && name[0] == 'I') {
      if (auto e = coordinate(1, Expression::Kind::Action)) return e;
    }

    std::ostringstream os;
    os << "unknown identifier '" << name << "'";
    throw ParseError(os.str(), t.line, t.column);
  }

  void expect_rparen() {
    const Token t = lex_.take();
    if (t.type != Tok::RParen)
      throw ParseError("expected ')'", t.line, t.column);
  }

  Lexer lex_;
  int dim_;
};

}  // namespace

Expression::Ptr parse_expression(std::string_view text, int dim) {
  if (dim < 1) throw PreconditionError("parse_expression: dimension must be positive");
  Parser parser(text, dim);
  return parser.parse();
}

CompiledField compile_field(const Expression& e, const TorusBox& space, double eps) {
  ScalarField field = ScalarField::from_point_function(
      space, [&](std::span<const double> theta, std::span<const double> action) {
        return e.eval(Expression::Env{theta, action, eps});
      });

  // Tail estimate on a refined grid with a doubled band.
  const TorusBox wide = TorusBox::make(space.dim(), space.action_lo(), space.action_hi(),
                                       2 * space.truncation() + 1,
                                       space.grid_points_per_axis());
  const detail::AngleTransform tr(wide, wide.modes_per_axis());
  const int n_angle = tr.n_angle();
  std::vector<double> values(n_angle);
  std::vector<std::complex<double>> modes(wide.n_modes());
  std::vector<double> theta(space.dim()), action(space.dim());
  std::vector<int> k(space.dim());

  double tail_energy = 0.0, total_energy = 0.0;
  for (int g = 0; g < space.n_grid(); ++g) {
    space.grid_point(g, action);
    for (int a = 0; a < n_angle; ++a) {
      tr.angle_point(a, theta);
      values[a] = e.eval(Expression::Env{theta, action, eps});
    }
    tr.values_to_modes(values, modes);
    for (int m = 0; m < wide.n_modes(); ++m) {
      wide.mode_multi(m, k);
      bool in_band = true;
      for (int j = 0; j < space.dim(); ++j)
        if (std::abs(k[j]) > space.truncation()) in_band = false;
      const double energy = std::norm(modes[m]);
      total_energy += energy;
      if (!in_band) tail_energy += energy;
    }
  }

  CompiledField out{std::move(field), 0.0};
  if (total_energy > 0.0) out.relative_tail_mass = std::sqrt(tail_energy / total_energy);
  return out;
}

}  // namespace toravg
