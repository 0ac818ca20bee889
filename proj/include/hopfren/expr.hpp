#pragma once

#include <memory>
#include <string>
#include <vector>

namespace hopfren {

// Tiny arithmetic-expression evaluator for command-line scalar fields.
// Supports numbers, pi, the coordinates x and y, +, -, *, /, unary minus,
// parentheses, and the functions sin, cos, exp.
class ScalarExpression {
  public:
    explicit ScalarExpression(const std::string& text);
    ScalarExpression(ScalarExpression&&) noexcept;
    ScalarExpression& operator=(ScalarExpression&&) noexcept;
    ~ScalarExpression();

    double evaluate(double x, double y) const;

    // samples the expression on the uniform periodic unit grid (row-major for
    // dim 2, x = row coordinate, y = column coordinate)
    std::vector<double> sample(int dim, int points_per_axis) const;

    struct Node;  // parse-tree node, defined by the implementation

  private:
    std::unique_ptr<Node> root_;
};

}  // namespace hopfren
