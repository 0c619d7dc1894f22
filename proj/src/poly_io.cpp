#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "sonc/poly.hpp"

namespace sonc {

PolyParseError::PolyParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}

namespace {

class Parser {
public:
  Parser(std::string_view text, std::size_t n) : s_(text), n_(n) {}

  // Returns terms; the caller builds the polynomial once n is known.
  std::vector<std::pair<std::vector<std::pair<std::size_t, Rational>>, double>> run() {
    std::vector<std::pair<std::vector<std::pair<std::size_t, Rational>>, double>> out;
    skip_ws();
    if (at_end()) throw PolyParseError("empty input", pos_);
    bool first = true;
    while (true) {
      skip_ws();
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1.0 : 1.0;
        skip_ws();
      } else if (!first) {
        throw PolyParseError("expected '+' or '-'", pos_);
      }
      auto term = parse_term();
      term.second *= sign;
      out.push_back(std::move(term));
      first = false;
      skip_ws();
      if (at_end()) break;
    }
    return out;
  }

  std::size_t max_index() const { return max_index_; }

private:
  std::pair<std::vector<std::pair<std::size_t, Rational>>, double> parse_term() {
    double coeff = 1.0;
    std::vector<std::pair<std::size_t, Rational>> powers;
    bool any = false;
    while (true) {
      skip_ws();
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff *= parse_number();
      } else if (c == 'x') {
        ++pos_;
        std::size_t idx = parse_index();
        Rational e(1);
        skip_ws();
        if (peek() == '^') {
          ++pos_;
          e = parse_exponent();
        }
        powers.emplace_back(idx, e);
      } else {
        if (!any) throw PolyParseError(at_end() ? "unexpected end of input" : "expected a number or variable", pos_);
        break;
      }
      any = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        char d = peek();
        if (!(std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'x'))
          throw PolyParseError("expected a factor after '*'", pos_);
      }
    }
    return {std::move(powers), coeff};
  }

  double parse_number() {
    const char* begin = s_.data() + pos_;
    // strtod needs a terminated buffer; copy the candidate span.
    std::size_t end = pos_;
    while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                               s_[end] == 'e' || s_[end] == 'E' ||
                               ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
                                (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    std::string buf(begin, end - pos_);
    char* stop = nullptr;
    double v = std::strtod(buf.c_str(), &stop);
    if (stop == buf.c_str()) throw PolyParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(stop - buf.c_str());
    return v;
  }

  std::size_t parse_index() {
    std::size_t start = pos_;
    std::size_t idx = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      idx = idx * 10 + static_cast<std::size_t>(get() - '0');
      if (idx > 100000) throw PolyParseError("variable index too large", start);
    }
    if (start == pos_) throw PolyParseError("expected variable index after 'x'", pos_);
    if (idx == 0) throw PolyParseError("variables are numbered from x1", start);
    if (n_ != 0 && idx > n_)
      throw PolyParseError("variable x" + std::to_string(idx) + " exceeds dimension " + std::to_string(n_), start);
    max_index_ = std::max(max_index_, idx);
    return idx - 1;
  }

  std::int64_t parse_int() {
    skip_ws();
    bool neg = false;
    if (peek() == '-' || peek() == '+') neg = get() == '-';
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) throw PolyParseError("integer too large", start);
      v = v * 10 + (get() - '0');
    }
    if (start == pos_) throw PolyParseError("expected an integer", pos_);
    return neg ? -v : v;
  }

  Rational parse_exponent() {
    skip_ws();
    bool paren = false;
    if (peek() == '(') {
      ++pos_;
      paren = true;
    }
    std::int64_t num = parse_int();
    std::int64_t den = 1;
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      std::size_t at = pos_;
      den = parse_int();
      if (den <= 0) throw PolyParseError("exponent denominator must be positive", at);
    }
    if (paren) {
      skip_ws();
      if (peek() != ')') throw PolyParseError("expected ')'", pos_);
      ++pos_;
    }
    return Rational(num, den);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() { return s_[pos_++]; }

  std::string_view s_;
  std::size_t n_;
  std::size_t pos_ = 0;
  std::size_t max_index_ = 0;
};

SparsePoly build(const std::vector<std::pair<std::vector<std::pair<std::size_t, Rational>>, double>>& terms,
                 std::size_t n) {
  SparsePoly f(n);
  for (const auto& [powers, c] : terms) {
    Exponent e(n);
    for (const auto& [i, p] : powers) e[i] += p;
    f.add_term(e, c);
  }
  return f;
}

std::string format_double(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, c);
    if (std::strtod(tmp, nullptr) == c) return tmp;
  }
  return buf;
}

} // namespace

SparsePoly parse_poly(std::string_view text, std::size_t n) {
  Parser p(text, n);
  auto terms = p.run();
  return build(terms, n);
}

SparsePoly parse_poly(std::string_view text) {
  Parser p(text, 0);
  auto terms = p.run();
  return build(terms, p.max_index());
}

std::string to_string(const SparsePoly& f) {
  if (f.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    double mag = c;
    if (first) {
      if (c < 0) {
        out += "-";
        mag = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      mag = std::abs(c);
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.dim(); ++i) {
      if (e[i].is_zero()) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] != Rational(1)) {
        mono += "^";
        mono += e[i].sign() > 0 ? e[i].str() : "(" + e[i].str() + ")";
      }
    }
    if (mono.empty()) {
      out += format_double(mag);
    } else if (mag == 1.0) {
      out += mono;
    } else {
      out += format_double(mag) + "*" + mono;
    }
  }
  return out;
}

} // namespace sonc
