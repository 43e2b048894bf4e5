#include "parakern/coefficient.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

namespace parakern {

namespace {

// Flat-arena expression tree. Children are indices into the node vector,
// which keeps evaluation allocation-free.
enum class NodeKind { number, var_x, var_t, add, sub, mul, div, pow, neg, call };
enum class Fn { sin, cos, exp, sqrt, tanh };

struct Node {
  NodeKind kind;
  double value = 0.0;  // number
  int axis = 0;        // var_x
  Fn fn = Fn::sin;     // call
  int lhs = -1;
  int rhs = -1;
};

struct Ast {
  std::vector<Node> nodes;
  int root = -1;
  bool uses_t = false;

  double eval(const Vec& x, double t) const { return eval_node(root, x, t); }

  double eval_node(int id, const Vec& x, double t) const {
    const Node& nd = nodes[id];
    switch (nd.kind) {
      case NodeKind::number: return nd.value;
      case NodeKind::var_x: return x[nd.axis];
      case NodeKind::var_t: return t;
      case NodeKind::add: return eval_node(nd.lhs, x, t) + eval_node(nd.rhs, x, t);
      case NodeKind::sub: return eval_node(nd.lhs, x, t) - eval_node(nd.rhs, x, t);
      case NodeKind::mul: return eval_node(nd.lhs, x, t) * eval_node(nd.rhs, x, t);
      case NodeKind::div: return eval_node(nd.lhs, x, t) / eval_node(nd.rhs, x, t);
      case NodeKind::pow: return std::pow(eval_node(nd.lhs, x, t), eval_node(nd.rhs, x, t));
      case NodeKind::neg: return -eval_node(nd.lhs, x, t);
      case NodeKind::call: {
        const double a = eval_node(nd.lhs, x, t);
        switch (nd.fn) {
          case Fn::sin: return std::sin(a);
          case Fn::cos: return std::cos(a);
          case Fn::exp: return std::exp(a);
          case Fn::sqrt: return std::sqrt(a);
          case Fn::tanh: return std::tanh(a);
        }
      }
    }
    return 0.0;
  }

  std::string print(int id) const {
    const Node& nd = nodes[id];
    switch (nd.kind) {
      case NodeKind::number: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", nd.value);
        return buf;
      }
      case NodeKind::var_x: return "x" + std::to_string(nd.axis + 1);
      case NodeKind::var_t: return "t";
      case NodeKind::add: return "(" + print(nd.lhs) + " + " + print(nd.rhs) + ")";
      case NodeKind::sub: return "(" + print(nd.lhs) + " - " + print(nd.rhs) + ")";
      case NodeKind::mul: return "(" + print(nd.lhs) + " * " + print(nd.rhs) + ")";
      case NodeKind::div: return "(" + print(nd.lhs) + " / " + print(nd.rhs) + ")";
      case NodeKind::pow: return "(" + print(nd.lhs) + " ^ " + print(nd.rhs) + ")";
      case NodeKind::neg: return "(-" + print(nd.lhs) + ")";
      case NodeKind::call: {
        static const char* names[] = {"sin", "cos", "exp", "sqrt", "tanh"};
        return std::string(names[static_cast<int>(nd.fn)]) + "(" + print(nd.lhs) + ")";
      }
    }
    return "";
  }
};

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Ast parse() {
    Ast ast;
    ast.root = parse_expr(ast);
    skip_ws();
    if (pos_ != src_.size())
      throw parse_error("unexpected trailing input '" + src_.substr(pos_) + "'", pos_);
    for (const Node& n : ast.nodes)
      if (n.kind == NodeKind::var_t) ast.uses_t = true;
    return ast;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  int parse_expr(Ast& ast) {
    int lhs = parse_term(ast);
    for (;;) {
      if (accept('+')) {
        int rhs = parse_term(ast);
        ast.nodes.push_back({NodeKind::add, 0, 0, Fn::sin, lhs, rhs});
        lhs = static_cast<int>(ast.nodes.size()) - 1;
      } else if (accept('-')) {
        int rhs = parse_term(ast);
        ast.nodes.push_back({NodeKind::sub, 0, 0, Fn::sin, lhs, rhs});
        lhs = static_cast<int>(ast.nodes.size()) - 1;
      } else {
        return lhs;
      }
    }
  }

  int parse_term(Ast& ast) {
    int lhs = parse_factor(ast);
    for (;;) {
      if (accept('*')) {
        int rhs = parse_factor(ast);
        ast.nodes.push_back({NodeKind::mul, 0, 0, Fn::sin, lhs, rhs});
        lhs = static_cast<int>(ast.nodes.size()) - 1;
      } else if (accept('/')) {
        int rhs = parse_factor(ast);
        ast.nodes.push_back({NodeKind::div, 0, 0, Fn::sin, lhs, rhs});
        lhs = static_cast<int>(ast.nodes.size()) - 1;
      } else {
        return lhs;
      }
    }
  }

  int parse_factor(Ast& ast) {
    int base = parse_unary(ast);
    if (accept('^')) {
      int expo = parse_factor(ast);  // right associative
      ast.nodes.push_back({NodeKind::pow, 0, 0, Fn::sin, base, expo});
      return static_cast<int>(ast.nodes.size()) - 1;
    }
    return base;
  }

  int parse_unary(Ast& ast) {
    if (accept('-')) {
      int arg = parse_unary(ast);
      ast.nodes.push_back({NodeKind::neg, 0, 0, Fn::sin, arg, -1});
      return static_cast<int>(ast.nodes.size()) - 1;
    }
    if (accept('+')) return parse_unary(ast);
    return parse_primary(ast);
  }

  int parse_primary(Ast& ast) {
    skip_ws();
    if (pos_ >= src_.size()) throw parse_error("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number(ast);
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident(ast);
    if (c == '(') {
      ++pos_;
      int inner = parse_expr(ast);
      if (!accept(')')) throw parse_error("expected ')'", pos_);
      return inner;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos_);
  }

  int parse_number(Ast& ast) {
    std::size_t end = pos_;
    while (end < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.' ||
            src_[end] == 'e' || src_[end] == 'E' ||
            ((src_[end] == '+' || src_[end] == '-') && end > pos_ &&
             (src_[end - 1] == 'e' || src_[end - 1] == 'E'))))
      ++end;
    const std::string tok = src_.substr(pos_, end - pos_);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw parse_error("malformed number '" + tok + "'", pos_);
    }
    if (used != tok.size()) throw parse_error("malformed number '" + tok + "'", pos_);
    pos_ = end;
    ast.nodes.push_back({NodeKind::number, v, 0, Fn::sin, -1, -1});
    return static_cast<int>(ast.nodes.size()) - 1;
  }

  int parse_ident(Ast& ast) {
    std::size_t end = pos_;
    while (end < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
      ++end;
    const std::string name = src_.substr(pos_, end - pos_);
    const std::size_t start = pos_;
    pos_ = end;

    if (name == "t") {
      ast.nodes.push_back({NodeKind::var_t, 0, 0, Fn::sin, -1, -1});
      return static_cast<int>(ast.nodes.size()) - 1;
    }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
      ast.nodes.push_back({NodeKind::var_x, 0, name[1] - '1', Fn::sin, -1, -1});
      return static_cast<int>(ast.nodes.size()) - 1;
    }
    Fn fn;
    if (name == "sin") fn = Fn::sin;
    else if (name == "cos") fn = Fn::cos;
    else if (name == "exp") fn = Fn::exp;
    else if (name == "sqrt") fn = Fn::sqrt;
    else if (name == "tanh") fn = Fn::tanh;
    else throw parse_error("unknown identifier '" + name + "'", start);

    if (!accept('(')) throw parse_error("expected '(' after '" + name + "'", pos_);
    int arg = parse_expr(ast);
    if (!accept(')')) throw parse_error("expected ')'", pos_);
    ast.nodes.push_back({NodeKind::call, 0, 0, fn, arg, -1});
    return static_cast<int>(ast.nodes.size()) - 1;
  }
};

}  // namespace

CoefficientField constant_field(double v) {
  CoefficientField f;
  f.eval = [v](const Vec&, double) { return v; };
  f.lipschitz_x = 0.0;
  f.sup_bound = std::abs(v);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  f.source = buf;
  return f;
}

void estimate_field_bounds(CoefficientField& f, const Box& box, double t0, double t1) {
  const int n = box.dim;
  const int ns = 32;  // per spatial axis
  const int nt = 32;
  std::array<int, 3> count{1, 1, 1};
  for (int d = 0; d < n; ++d) count[d] = ns;

  double sup = 0.0, lip = 0.0;
  std::array<double, 3> step{0, 0, 0};
  for (int d = 0; d < n; ++d) step[d] = (box.hi[d] - box.lo[d]) / (ns - 1);

  for (int k = 0; k < nt; ++k) {
    const double t = t0 + (t1 - t0) * (nt == 1 ? 0.0 : double(k) / (nt - 1));
    for (int i = 0; i < count[0]; ++i)
      for (int j = 0; j < count[1]; ++j)
        for (int l = 0; l < count[2]; ++l) {
          Vec x{box.lo[0] + step[0] * i, box.lo[1] + step[1] * j, box.lo[2] + step[2] * l};
          const double v = f.eval(x, t);
          if (!std::isfinite(v))
            throw evaluation_error("coefficient evaluates non-finite during bound sampling");
          sup = std::max(sup, std::abs(v));
          for (int d = 0; d < n; ++d) {
            Vec y = x;
            y[d] += step[d];
            if (y[d] <= box.hi[d] + 1e-12) {
              const double w = f.eval(y, t);
              lip = std::max(lip, std::abs(w - v) / step[d]);
            }
          }
        }
  }
  f.sup_bound = sup * 1.1;
  f.lipschitz_x = lip * 1.1;
}

CoefficientField parse_coefficient(const std::string& expr, const Box& box,
                                   double t0, double t1) {
  Parser parser(expr);
  auto ast = std::make_shared<Ast>(parser.parse());

  CoefficientField f;
  f.eval = [ast](const Vec& x, double t) { return ast->eval(x, t); };
  f.source = ast->print(ast->root);
  f.time_dependent = ast->uses_t;
  estimate_field_bounds(f, box, t0, t1);
  return f;
}

}  // namespace parakern
