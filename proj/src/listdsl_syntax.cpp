#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "pacsketch/listdsl.hpp"

namespace pacsketch::dsl {

namespace {

const std::pair<std::string_view, char> kSuperscripts[] = {
    {"⁰", '0'}, {"¹", '1'}, {"²", '2'}, {"³", '3'}, {"⁴", '4'},
    {"⁵", '5'}, {"⁶", '6'}, {"⁷", '7'}, {"⁸", '8'}, {"⁹", '9'},
};

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : s) {
    if (ch == '(' || ch == ')') {
      flush();
      out.emplace_back(1, ch);
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  return out;
}

std::optional<int> input_index(std::string_view tok) {
  constexpr std::string_view kPrefix = "input";
  if (tok.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  std::string_view rest = tok.substr(kPrefix.size());
  if (!rest.empty() && rest.front() == '_') rest.remove_prefix(1);
  std::string digits;
  while (!rest.empty()) {
    if (std::isdigit(static_cast<unsigned char>(rest.front()))) {
      digits += rest.front();
      rest.remove_prefix(1);
      continue;
    }
    bool matched = false;
    for (const auto& [sup, d] : kSuperscripts) {
      if (rest.substr(0, sup.size()) == sup) {
        digits += d;
        rest.remove_prefix(sup.size());
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  if (digits.empty()) return std::nullopt;
  return std::stoi(digits);
}

class Parser {
 public:
  explicit Parser(std::vector<std::string> toks) : toks_(std::move(toks)) {}

  Prog parse_all() {
    Prog p = expr();
    if (pos_ != toks_.size()) fail("unexpected '" + toks_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DslError("parse error at token " + std::to_string(pos_) + ": " + what);
  }

  const std::string& peek() const {
    if (pos_ >= toks_.size()) fail("unexpected end of input");
    return toks_[pos_];
  }

  std::string next() {
    std::string t = peek();
    ++pos_;
    return t;
  }

  Prog atom(const std::string& tok) {
    if (auto idx = input_index(tok)) return make_input(*idx);
    if (auto op = op_from_name(tok)) return make_comp(*op);
    std::int64_t v = 0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last) return make_const(v);
    fail("unknown symbol '" + tok + "'");
  }

  std::vector<Prog> args_until_close() {
    std::vector<Prog> out;
    while (peek() != ")") out.push_back(expr());
    ++pos_;
    return out;
  }

  Prog expr() {
    std::string tok = next();
    if (tok == ")") fail("unexpected ')'");
    if (tok != "(") return atom(tok);
    const std::string& head = peek();
    static const std::pair<std::string_view, std::size_t> kForms[] = {
        {"fold", 3}, {"map", 2}, {"filter", 2}, {"slice", 3}, {"length", 1}};
    for (const auto& [name, n] : kForms) {
      if (head != name) continue;
      ++pos_;
      auto a = args_until_close();
      if (a.size() != n) {
        fail(std::string(name) + " takes " + std::to_string(n) + " arguments");
      }
      if (name == "fold") return make_fold(a[0], a[1], a[2]);
      if (name == "map") return make_map(a[0], a[1]);
      if (name == "filter") return make_filter(a[0], a[1]);
      if (name == "slice") return make_slice(a[0], a[1], a[2]);
      return make_length(a[0]);
    }
    auto parts = args_until_close();
    if (parts.empty()) fail("empty parentheses");
    Prog p = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) p = make_app(p, parts[i]);
    return p;
  }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

void print_into(const Prog& p, std::string& out) {
  switch (p->kind) {
    case NodeKind::Input:
      out += "input" + std::to_string(p->index);
      return;
    case NodeKind::IntConst:
      out += std::to_string(p->value);
      return;
    case NodeKind::Comp:
      out += op_name(p->op);
      return;
    case NodeKind::App: {
      std::vector<Prog> args;
      Prog head = p;
      while (head->kind == NodeKind::App) {
        args.push_back(head->kids[1]);
        head = head->kids[0];
      }
      out += "(";
      print_into(head, out);
      for (auto it = args.rbegin(); it != args.rend(); ++it) {
        out += " ";
        print_into(*it, out);
      }
      out += ")";
      return;
    }
    default:
      break;
  }
  const char* name = p->kind == NodeKind::Fold     ? "fold"
                     : p->kind == NodeKind::Map    ? "map"
                     : p->kind == NodeKind::Filter ? "filter"
                     : p->kind == NodeKind::Slice  ? "slice"
                                                   : "length";
  out += "(";
  out += name;
  for (const auto& k : p->kids) {
    out += " ";
    print_into(k, out);
  }
  out += ")";
}

}  // namespace

Prog parse_program(std::string_view text) {
  Parser parser(tokenize(text));
  return number_occurrences(parser.parse_all());
}

std::string print_program(const Prog& p) {
  std::string out;
  print_into(p, out);
  return out;
}

}  // namespace pacsketch::dsl
