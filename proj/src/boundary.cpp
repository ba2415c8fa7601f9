#include "dama/boundary.hpp"

#include <algorithm>
#include <cctype>

#include "dama/error.hpp"

namespace dama {

BoundaryExpr BoundaryExpr::atom(std::string name, unsigned traits) {
  if (name.empty()) throw PreconditionError("atom name must be nonempty");
  if (traits & trait::kTwoPoint) traits |= trait::kTotallyDisconnected;
  BoundaryExpr e(Kind::Atom);
  e.name_ = std::move(name);
  e.traits_ = traits;
  return e;
}

BoundaryExpr BoundaryExpr::amalgam(std::vector<BoundaryExpr> args) {
  if (args.empty()) throw PreconditionError("zero-ary amalgam undefined");
  BoundaryExpr e(Kind::Amalgam);
  e.args_ = std::move(args);
  return e;
}

bool BoundaryExpr::is_totally_disconnected() const {
  switch (kind_) {
    case Kind::Cantor:
    case Kind::PointPair:
      return true;
    case Kind::Atom:
      return (traits_ & trait::kTotallyDisconnected) != 0;
    default:
      return false;
  }
}

std::size_t BoundaryExpr::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& a : args_) n += a.leaf_count();
  return n;
}

std::size_t BoundaryExpr::depth() const {
  std::size_t d = 0;
  for (const auto& a : args_) d = std::max(d, a.depth());
  return is_leaf() ? 0 : d + 1;
}

int compare(const BoundaryExpr& a, const BoundaryExpr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  if (a.traits() != b.traits()) return a.traits() < b.traits() ? -1 : 1;
  const auto& x = a.args();
  const auto& y = b.args();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (int c = compare(x[i], y[i]); c != 0) return c;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

BoundaryExpr amalgam_of(std::vector<BoundaryExpr> args) {
  return BoundaryExpr::amalgam(std::move(args));
}

namespace {

void flatten_into(const BoundaryExpr& e, std::vector<BoundaryExpr>& out) {
  for (const auto& a : e.args()) {
    if (a.kind() == Kind::Amalgam) {
      flatten_into(a, out);
    } else {
      out.push_back(a);
    }
  }
}

}  // namespace

BoundaryExpr normalize(const BoundaryExpr& e) {
  if (e.is_leaf()) return e;
  std::vector<BoundaryExpr> leaves;
  flatten_into(e, leaves);
  std::erase_if(leaves, [](const BoundaryExpr& a) { return a.kind() == Kind::Empty; });
  const bool has_solid = std::any_of(leaves.begin(), leaves.end(),
                                     [](const BoundaryExpr& a) { return !a.is_totally_disconnected(); });
  if (!has_solid) return BoundaryExpr::cantor();
  std::erase_if(leaves, [](const BoundaryExpr& a) { return a.is_totally_disconnected(); });
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  return BoundaryExpr::amalgam(std::move(leaves));
}

bool is_normal_form(const BoundaryExpr& e) {
  if (e.is_leaf()) return true;
  const auto& args = e.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (!a.is_leaf() || a.kind() != Kind::Atom || a.is_totally_disconnected()) return false;
    if (i > 0 && !(args[i - 1] < a)) return false;
  }
  return true;
}

bool equal_normal(const BoundaryExpr& a, const BoundaryExpr& b) {
  return normalize(a) == normalize(b);
}

std::string to_string(const BoundaryExpr& e) {
  switch (e.kind()) {
    case Kind::Empty:
      return "Empty";
    case Kind::Cantor:
      return "Cantor";
    case Kind::PointPair:
      return "PointPair";
    case Kind::Atom:
      if (e.traits() & trait::kTwoPoint) return e.name() + ":two_point";
      if (e.traits() & trait::kTotallyDisconnected) return e.name() + ":td";
      return e.name();
    case Kind::Amalgam: {
      std::string out = "Amalgam(";
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(e.args()[i]);
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BoundaryExpr parse() {
    BoundaryExpr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
           c == ':';
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("offset " + std::to_string(pos_), what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    int braces = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '{') ++braces;
      if (c == '}') {
        if (braces == 0) fail("unbalanced '}'");
        --braces;
      }
      if (braces == 0 && is_delim(c)) break;
      ++pos_;
    }
    if (braces != 0) fail("unterminated '{'");
    if (pos_ == start) fail("expected an expression");
    return std::string(text_.substr(start, pos_ - start));
  }

  BoundaryExpr expr() {
    std::string word = identifier();
    if (word == "Empty") return BoundaryExpr::empty();
    if (word == "Cantor") return BoundaryExpr::cantor();
    if (word == "PointPair") return BoundaryExpr::point_pair();
    if (word == "Amalgam") {
      if (!eat('(')) fail("expected '(' after Amalgam");
      if (eat(')')) fail("zero-ary amalgam undefined");
      std::vector<BoundaryExpr> args;
      do {
        args.push_back(expr());
      } while (eat(','));
      if (!eat(')')) fail("expected ')' or ','");
      return BoundaryExpr::amalgam(std::move(args));
    }
    unsigned traits = 0;
    while (eat(':')) {
      std::string t = identifier();
      if (t == "td") {
        traits |= trait::kTotallyDisconnected;
      } else if (t == "two_point") {
        traits |= trait::kTwoPoint;
      } else {
        fail("unknown trait '" + t + "'");
      }
    }
    return BoundaryExpr::atom(std::move(word), traits);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BoundaryExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace dama
