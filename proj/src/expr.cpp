#include "hopfren/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace hopfren {

struct ScalarExpression::Node {
    enum class Kind { kNumber, kVarX, kVarY, kAdd, kSub, kMul, kDiv, kNeg, kSin, kCos, kExp };
    Kind kind;
    double value = 0.0;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
};

namespace {

using Node = ScalarExpression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind kind, NodePtr left = nullptr, NodePtr right = nullptr) {
    auto node = std::make_unique<Node>();
    node->kind = kind;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        NodePtr node = parse_sum();
        skip_spaces();
        if (pos_ != text_.size()) {
            throw std::invalid_argument("unexpected trailing input in expression: " + text_);
        }
        return node;
    }

  private:
    void skip_spaces() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool consume(char c) {
        skip_spaces();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr node = parse_product();
        while (true) {
            if (consume('+')) {
                node = make(Node::Kind::kAdd, std::move(node), parse_product());
            } else if (consume('-')) {
                node = make(Node::Kind::kSub, std::move(node), parse_product());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr node = parse_unary();
        while (true) {
            if (consume('*')) {
                node = make(Node::Kind::kMul, std::move(node), parse_unary());
            } else if (consume('/')) {
                node = make(Node::Kind::kDiv, std::move(node), parse_unary());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return make(Node::Kind::kNeg, parse_unary());
        if (consume('+')) return parse_unary();
        return parse_atom();
    }

    NodePtr parse_atom() {
        skip_spaces();
        if (pos_ >= text_.size()) {
            throw std::invalid_argument("expression ended unexpectedly: " + text_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr node = parse_sum();
            if (!consume(')')) {
                throw std::invalid_argument("missing closing parenthesis in expression: " + text_);
            }
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_word();
        throw std::invalid_argument(std::string("unexpected character '") + c + "' in expression");
    }

    NodePtr parse_number() {
        size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
            ++end;
        }
        const std::string token = text_.substr(pos_, end - pos_);
        size_t used = 0;
        double value;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid number in expression: " + token);
        }
        if (used != token.size()) {
            throw std::invalid_argument("invalid number in expression: " + token);
        }
        pos_ = end;
        auto node = make(Node::Kind::kNumber);
        node->value = value;
        return node;
    }

    NodePtr parse_word() {
        size_t end = pos_;
        while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
        const std::string word = text_.substr(pos_, end - pos_);
        pos_ = end;
        if (word == "pi") {
            auto node = make(Node::Kind::kNumber);
            node->value = M_PI;
            return node;
        }
        if (word == "x") return make(Node::Kind::kVarX);
        if (word == "y") return make(Node::Kind::kVarY);
        Node::Kind kind;
        if (word == "sin") {
            kind = Node::Kind::kSin;
        } else if (word == "cos") {
            kind = Node::Kind::kCos;
        } else if (word == "exp") {
            kind = Node::Kind::kExp;
        } else {
            throw std::invalid_argument("unknown symbol in expression: " + word);
        }
        if (!consume('(')) {
            throw std::invalid_argument("expected '(' after function " + word);
        }
        NodePtr argument = parse_sum();
        if (!consume(')')) {
            throw std::invalid_argument("missing closing parenthesis after " + word);
        }
        return make(kind, std::move(argument));
    }

    const std::string& text_;
    size_t pos_ = 0;
};

double evaluate_node(const Node& node, double x, double y) {
    switch (node.kind) {
        case Node::Kind::kNumber: return node.value;
        case Node::Kind::kVarX: return x;
        case Node::Kind::kVarY: return y;
        case Node::Kind::kAdd:
            return evaluate_node(*node.left, x, y) + evaluate_node(*node.right, x, y);
        case Node::Kind::kSub:
            return evaluate_node(*node.left, x, y) - evaluate_node(*node.right, x, y);
        case Node::Kind::kMul:
            return evaluate_node(*node.left, x, y) * evaluate_node(*node.right, x, y);
        case Node::Kind::kDiv:
            return evaluate_node(*node.left, x, y) / evaluate_node(*node.right, x, y);
        case Node::Kind::kNeg: return -evaluate_node(*node.left, x, y);
        case Node::Kind::kSin: return std::sin(evaluate_node(*node.left, x, y));
        case Node::Kind::kCos: return std::cos(evaluate_node(*node.left, x, y));
        case Node::Kind::kExp: return std::exp(evaluate_node(*node.left, x, y));
    }
    throw std::logic_error("unreachable expression node");
}

}  // namespace

ScalarExpression::ScalarExpression(const std::string& text) : root_(Parser(text).parse()) {}
ScalarExpression::ScalarExpression(ScalarExpression&&) noexcept = default;
ScalarExpression& ScalarExpression::operator=(ScalarExpression&&) noexcept = default;
ScalarExpression::~ScalarExpression() = default;

double ScalarExpression::evaluate(double x, double y) const {
    return evaluate_node(*root_, x, y);
}

std::vector<double> ScalarExpression::sample(int dim, int points_per_axis) const {
    if (dim != 1 && dim != 2) throw std::domain_error("sampling dimension must be 1 or 2");
    if (points_per_axis < 1) throw std::domain_error("need at least one point per axis");
    std::vector<double> values;
    const double h = 1.0 / points_per_axis;
    if (dim == 1) {
        values.reserve(points_per_axis);
        for (int i = 0; i < points_per_axis; ++i) values.push_back(evaluate(i * h, 0.0));
        return values;
    }
    values.reserve(static_cast<size_t>(points_per_axis) * points_per_axis);
    for (int i = 0; i < points_per_axis; ++i) {
        for (int j = 0; j < points_per_axis; ++j) {
            values.push_back(evaluate(i * h, j * h));
        }
    }
    return values;
}

}  // namespace hopfren
