#include "tbgeo/expr.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cctype>

namespace tbg {

namespace {

struct FuncInfo {
  const char* name;
  Expr::Func id;
};

constexpr std::array<FuncInfo, 6> kFuncs = {{
    {"sin", Expr::Func::Sin},
    {"cos", Expr::Func::Cos},
    {"exp", Expr::Func::Exp},
    {"log", Expr::Func::Log},
    {"sqrt", Expr::Func::Sqrt},
    {"tanh", Expr::Func::Tanh},
}};

const char* func_name(Expr::Func f) {
  for (const auto& fi : kFuncs)
    if (fi.id == f) return fi.name;
  return "?";
}

class Parser {
 public:
  Parser(std::string_view src, int dim, std::vector<Expr::Node>& nodes)
      : src_(src), dim_(dim), nodes_(nodes) {}

  int run() {
    int r = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input", pos_);
    return r;
  }

 private:
  std::string_view src_;
  int dim_;
  std::vector<Expr::Node>& nodes_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, size_t at) { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  int add_node(Expr::Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int add_binary(Expr::Kind k, int a, int b) {
    Expr::Node n;
    n.kind = k;
    n.a = a;
    n.b = b;
    n.offset = nodes_[a].offset;
    n.len = nodes_[b].offset + nodes_[b].len - n.offset;
    n.is_const = nodes_[a].is_const && nodes_[b].is_const;
    return add_node(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        char op = src_[pos_++];
        int rhs = parse_term();
        lhs = add_binary(op == '+' ? Expr::Kind::Add : Expr::Kind::Sub, lhs, rhs);
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && (src_[pos_] == '*' || src_[pos_] == '/')) {
        char op = src_[pos_++];
        int rhs = parse_unary();
        lhs = add_binary(op == '*' ? Expr::Kind::Mul : Expr::Kind::Div, lhs, rhs);
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '-') {
      size_t at = pos_++;
      int child = parse_unary();
      Expr::Node n;
      n.kind = Expr::Kind::Neg;
      n.a = child;
      n.offset = at;
      n.len = nodes_[child].offset + nodes_[child].len - at;
      n.is_const = nodes_[child].is_const;
      return add_node(n);
    }
    return parse_factor();
  }

  int parse_factor() {
    int base = parse_atom();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      ++pos_;
      int exponent = parse_factor();  // right-associative
      return add_binary(Expr::Kind::Pow, base, exponent);
    }
    return base;
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input", pos_);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      size_t at = pos_++;
      int inner = parse_expr();
      if (!peek_is(')')) fail("expected ')'", pos_);
      ++pos_;
      nodes_[inner].offset = at;
      nodes_[inner].len = pos_ - at;
      return inner;
    }
    fail(std::string("unexpected character '") + c + "'", pos_);
  }

  int parse_number() {
    size_t at = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
    if (ec != std::errc()) fail("malformed number", at);
    pos_ = static_cast<size_t>(ptr - src_.data());
    Expr::Node n;
    n.kind = Expr::Kind::Num;
    n.num = value;
    n.is_const = true;
    n.offset = at;
    n.len = pos_ - at;
    return add_node(n);
  }

  int parse_ident() {
    size_t at = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string_view name = src_.substr(at, pos_ - at);

    // coordinate x1..xm
    if (name.size() >= 2 && name[0] == 'x' && name[1] != '0' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int idx = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (idx < 1 || idx > dim_)
        fail("coordinate index out of range (chart has x1..x" + std::to_string(dim_) + ")", at);
      Expr::Node n;
      n.kind = Expr::Kind::Coord;
      n.coord = idx - 1;
      n.offset = at;
      n.len = pos_ - at;
      return add_node(n);
    }

    for (const auto& fi : kFuncs) {
      if (name == fi.name) {
        if (!peek_is('(')) fail("function '" + std::string(name) + "' requires '('", pos_);
        ++pos_;
        int arg = parse_expr();
        if (!peek_is(')')) fail("expected ')'", pos_);
        ++pos_;
        Expr::Node n;
        n.kind = Expr::Kind::Call;
        n.func = fi.id;
        n.a = arg;
        n.offset = at;
        n.len = pos_ - at;
        n.is_const = nodes_[arg].is_const;
        return add_node(n);
      }
    }
    fail("unknown identifier '" + std::string(name) + "'", at);
  }
};

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Printing precedence: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5.
int node_prec(const Expr::Node& n) {
  switch (n.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

void print_node(const Expr& e, int idx, int min_prec, std::string& out) {
  const auto& n = e.nodes()[idx];
  bool paren = node_prec(n) < min_prec;
  if (paren) out += '(';
  switch (n.kind) {
    case Expr::Kind::Num: out += fmt_num(n.num); break;
    case Expr::Kind::Coord: out += "x" + std::to_string(n.coord + 1); break;
    case Expr::Kind::Add:
      print_node(e, n.a, 1, out);
      out += " + ";
      print_node(e, n.b, 2, out);
      break;
    case Expr::Kind::Sub:
      print_node(e, n.a, 1, out);
      out += " - ";
      print_node(e, n.b, 2, out);
      break;
    case Expr::Kind::Mul:
      print_node(e, n.a, 2, out);
      out += "*";
      print_node(e, n.b, 3, out);
      break;
    case Expr::Kind::Div:
      print_node(e, n.a, 2, out);
      out += "/";
      print_node(e, n.b, 3, out);
      break;
    case Expr::Kind::Neg:
      out += "-";
      print_node(e, n.a, 3, out);
      break;
    case Expr::Kind::Pow:
      print_node(e, n.a, 5, out);  // base must be an atom
      out += "^";
      print_node(e, n.b, 4, out);
      break;
    case Expr::Kind::Call:
      out += func_name(n.func);
      out += "(";
      print_node(e, n.a, 0, out);
      out += ")";
      break;
  }
  if (paren) out += ')';
}

struct Evaluator {
  const Expr& e;
  const Vec& x;
  bool want_jets;
  int m;

  [[noreturn]] void fail(const Expr::Node& n, const std::string& msg) const {
    throw EvalError(msg, n.offset, std::string(e.source().substr(n.offset, n.len)));
  }

  Jet2 jet(int idx) const {
    const auto& n = e.nodes()[idx];
    switch (n.kind) {
      case Expr::Kind::Num: return Jet2::constant(m, n.num);
      case Expr::Kind::Coord: return Jet2::variable(m, n.coord, x[n.coord]);
      case Expr::Kind::Add: return jet(n.a) + jet(n.b);
      case Expr::Kind::Sub: return jet(n.a) - jet(n.b);
      case Expr::Kind::Mul: return jet(n.a) * jet(n.b);
      case Expr::Kind::Div: {
        Jet2 den = jet(n.b);
        if (den.val == 0.0) fail(e.nodes()[n.b], "division by zero");
        return jet(n.a) / den;
      }
      case Expr::Kind::Neg: return -jet(n.a);
      case Expr::Kind::Pow: return pow_node(n);
      case Expr::Kind::Call: return call_node(n);
    }
    fail(e.nodes()[idx], "corrupt expression node");
  }

  Jet2 pow_node(const Expr::Node& n) const {
    Jet2 base = jet(n.a);
    if (e.nodes()[n.b].is_const) {
      double c = value(n.b);
      double ri = std::nearbyint(c);
      if (c == ri && std::abs(c) <= 1e9) {
        long long k = static_cast<long long>(ri);
        if (k == 0) return Jet2::constant(m, 1.0);
        if (base.val == 0.0 && k < 0) fail(n, "zero raised to negative power");
        double v = std::pow(base.val, static_cast<double>(k));
        double d1 = static_cast<double>(k) * std::pow(base.val, static_cast<double>(k - 1));
        double d2 = (k == 1) ? 0.0
                             : static_cast<double>(k) * static_cast<double>(k - 1) *
                                   std::pow(base.val, static_cast<double>(k - 2));
        return jet_unary(base, v, d1, d2);
      }
      if (base.val <= 0.0) fail(n, "non-integer power of a non-positive base");
      double v = std::pow(base.val, c);
      return jet_unary(base, v, c * v / base.val, c * (c - 1.0) * v / (base.val * base.val));
    }
    if (base.val <= 0.0) fail(n, "variable power of a non-positive base");
    // f^g = exp(g * log f)
    Jet2 lf = jet_unary(base, std::log(base.val), 1.0 / base.val, -1.0 / (base.val * base.val));
    Jet2 a = jet(n.b) * lf;
    double ev = std::exp(a.val);
    return jet_unary(a, ev, ev, ev);
  }

  Jet2 call_node(const Expr::Node& n) const {
    Jet2 a = jet(n.a);
    double v = a.val;
    switch (n.func) {
      case Expr::Func::Sin: return jet_unary(a, std::sin(v), std::cos(v), -std::sin(v));
      case Expr::Func::Cos: return jet_unary(a, std::cos(v), -std::sin(v), -std::cos(v));
      case Expr::Func::Exp: {
        double ev = std::exp(v);
        return jet_unary(a, ev, ev, ev);
      }
      case Expr::Func::Log:
        if (v <= 0.0) fail(n, "log of a non-positive argument");
        return jet_unary(a, std::log(v), 1.0 / v, -1.0 / (v * v));
      case Expr::Func::Sqrt: {
        if (v <= 0.0) fail(n, "sqrt of a non-positive argument");
        double s = std::sqrt(v);
        return jet_unary(a, s, 0.5 / s, -0.25 / (s * v));
      }
      case Expr::Func::Tanh: {
        double t = std::tanh(v);
        double d1 = 1.0 - t * t;
        return jet_unary(a, t, d1, -2.0 * t * d1);
      }
    }
    fail(n, "corrupt function node");
  }

  double value(int idx) const {
    const auto& n = e.nodes()[idx];
    switch (n.kind) {
      case Expr::Kind::Num: return n.num;
      case Expr::Kind::Coord: return x[n.coord];
      case Expr::Kind::Add: return value(n.a) + value(n.b);
      case Expr::Kind::Sub: return value(n.a) - value(n.b);
      case Expr::Kind::Mul: return value(n.a) * value(n.b);
      case Expr::Kind::Div: {
        double den = value(n.b);
        if (den == 0.0) fail(e.nodes()[n.b], "division by zero");
        return value(n.a) / den;
      }
      case Expr::Kind::Neg: return -value(n.a);
      case Expr::Kind::Pow: {
        double b = value(n.a), c = value(n.b);
        if (!e.nodes()[n.b].is_const && b <= 0.0)
          fail(n, "variable power of a non-positive base");
        if (b == 0.0 && c < 0.0) fail(n, "zero raised to negative power");
        if (b <= 0.0 && c != std::nearbyint(c))
          fail(n, "non-integer power of a non-positive base");
        if (b == 0.0 && c == 0.0) return 1.0;
        return std::pow(b, c);
      }
      case Expr::Kind::Call: {
        double v = value(n.a);
        switch (n.func) {
          case Expr::Func::Sin: return std::sin(v);
          case Expr::Func::Cos: return std::cos(v);
          case Expr::Func::Exp: return std::exp(v);
          case Expr::Func::Log:
            if (v <= 0.0) fail(n, "log of a non-positive argument");
            return std::log(v);
          case Expr::Func::Sqrt:
            if (v <= 0.0) fail(n, "sqrt of a non-positive argument");
            return std::sqrt(v);
          case Expr::Func::Tanh: return std::tanh(v);
        }
        fail(n, "corrupt function node");
      }
    }
    fail(e.nodes()[idx], "corrupt expression node");
  }
};

} // namespace

Expr parse(std::string_view src, int dim) {
  if (dim < 1) throw ParseError("chart dimension must be at least 1", 0);
  Expr e;
  e.dim_ = dim;
  e.source_ = std::string(src);
  Parser p(src, dim, e.nodes_);
  e.root_ = p.run();
  return e;
}

std::string to_string(const Expr& e) {
  std::string out;
  print_node(e, e.root(), 0, out);
  return out;
}

double eval(const Expr& e, const Vec& x) {
  Evaluator ev{e, x, false, e.dim()};
  return ev.value(e.root());
}

Jet2 eval_jet2(const Expr& e, const Vec& x) {
  Evaluator ev{e, x, true, e.dim()};
  return ev.jet(e.root());
}

namespace {
bool same_node(const Expr& a, int ia, const Expr& b, int ib) {
  const auto& na = a.nodes()[ia];
  const auto& nb = b.nodes()[ib];
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case Expr::Kind::Num: return na.num == nb.num;
    case Expr::Kind::Coord: return na.coord == nb.coord;
    case Expr::Kind::Neg: return same_node(a, na.a, b, nb.a);
    case Expr::Kind::Call:
      return na.func == nb.func && same_node(a, na.a, b, nb.a);
    default:
      return same_node(a, na.a, b, nb.a) && same_node(a, na.b, b, nb.b);
  }
}
} // namespace

bool same_tree(const Expr& a, const Expr& b) {
  return a.dim() == b.dim() && same_node(a, a.root(), b, b.root());
}

} // namespace tbg
