#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "contact/jet.hpp"

namespace contact {

enum class NodeKind { Constant, NamedConstant, Variable, Negate, Binary, Call };

enum class Func { Sin, Cos, Tan, Asin, Acos, Atan, Sinh, Cosh, Tanh, Exp, Log, Sqrt };

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;  // Constant, NamedConstant
  std::string name;    // NamedConstant ("pi", "e")
  int var = -1;        // Variable
  char op = 0;         // Binary: + - * / ^
  Func func = Func::Sin;
  std::shared_ptr<const Node> lhs, rhs;  // Negate and Call use lhs only
};

using NodePtr = std::shared_ptr<const Node>;

// Immutable parsed expression over a fixed list of chart coordinates.
class Expression {
 public:
  Expression() = default;
  Expression(NodePtr root, std::vector<std::string> coords);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::vector<std::string>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  bool empty() const { return !root_; }

  double eval(std::span<const double> point) const;
  Jet eval_jet(std::span<const double> point, int order) const;

  std::string print() const;
  bool depends_on_variables() const;

 private:
  NodePtr root_;
  std::vector<std::string> coords_;
};

Expression parse(const std::string& text, const std::vector<std::string>& coords);
Jet eval_jet(const Expression& e, std::span<const double> point, int order);
std::string print(const Expression& e);
std::string print_node(const Node& n, const std::vector<std::string>& coords);
bool structurally_equal(const Node& a, const Node& b);
bool structurally_equal(const Expression& a, const Expression& b);

const char* func_name(Func f);

}  // namespace contact
