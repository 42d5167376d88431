#include "chaosclt/kernel_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "chaosclt/errors.hpp"

namespace chaosclt {

namespace {

constexpr std::string_view kMagic = "chaosclt-kernel";

void append_number(std::string& out, double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  out.append(buffer, result.ptr);
}

struct Token {
  std::string_view text;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  // Next token on any line; nullopt at end of input.
  std::optional<Token> next() {
    skip_blank();
    if (pos_ >= text_.size()) return std::nullopt;
    Token t{{}, line_, column_};
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '#') {
      advance();
    }
    t.text = text_.substr(start, pos_ - start);
    return t;
  }

  Token expect(std::string_view what) {
    auto t = next();
    if (!t) throw ParseError(line_, column_, "unexpected end of input, expected " + std::string(what));
    return *t;
  }

  void expect_keyword(std::string_view keyword) {
    const Token t = expect("'" + std::string(keyword) + "'");
    if (t.text != keyword) {
      throw ParseError(t.line, t.column, "expected '" + std::string(keyword) + "', found '" +
                                             std::string(t.text) + "'");
    }
  }

  long long expect_integer(std::string_view what) {
    const Token t = expect(what);
    long long value = 0;
    const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || end != t.text.data() + t.text.size()) {
      throw ParseError(t.line, t.column, "expected integer " + std::string(what) + ", found '" +
                                             std::string(t.text) + "'");
    }
    return value;
  }

  double expect_number(std::string_view what) {
    const Token t = expect(what);
    const std::string copy(t.text);
    char* end = nullptr;
    const double value = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size()) {
      throw ParseError(t.line, t.column, "expected number " + std::string(what) + ", found '" + copy + "'");
    }
    if (!std::isfinite(value)) {
      throw ParseError(t.line, t.column, std::string(what) + " is not finite: '" + copy + "'");
    }
    return value;
  }

  void expect_end_of_input() {
    if (const auto t = next()) {
      throw ParseError(t->line, t->column, "unexpected content after 'end': '" + std::string(t->text) + "'");
    }
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::string serialize_kernel(const Kernel& kernel) {
  std::string out;
  out += std::string(kMagic) + " 1\n";
  out += "order " + std::to_string(order(kernel)) + "\n";
  out += "dim " + std::to_string(dim(kernel)) + "\n";
  if (const auto* dense = std::get_if<DenseKernel>(&kernel)) {
    out += "representation dense\nvalues\n";
    const auto values = dense->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      append_number(out, values[i]);
      out += ((i + 1) % dense->dim() == 0 || i + 1 == values.size()) ? '\n' : ' ';
    }
  } else {
    const auto& r = std::get<RankOneSumKernel>(kernel);
    out += "representation rank-one\n";
    out += std::string("stationary ") + (r.stationary() ? "1" : "0") + "\n";
    out += "terms " + std::to_string(r.term_count()) + "\n";
    for (Eigen::Index t = 0; t < r.vectors().cols(); ++t) {
      out += "term ";
      append_number(out, r.coefficients()(t));
      for (Eigen::Index i = 0; i < r.vectors().rows(); ++i) {
        out += ' ';
        append_number(out, r.vectors()(i, t));
      }
      out += '\n';
    }
  }
  out += "end\n";
  return out;
}

Kernel parse_kernel(std::string_view text, std::size_t guard) {
  Tokenizer in(text);
  in.expect_keyword(kMagic);
  {
    const Token version = in.expect("format version");
    if (version.text != "1") {
      throw ParseError(version.line, version.column,
                       "unsupported format version '" + std::string(version.text) + "'");
    }
  }
  in.expect_keyword("order");
  const Token order_at = in.expect("order value");
  const long long order_value = [&] {
    long long v = 0;
    const auto [end, ec] = std::from_chars(order_at.text.data(),
                                           order_at.text.data() + order_at.text.size(), v);
    if (ec != std::errc{} || end != order_at.text.data() + order_at.text.size() || v < 0 || v > 64) {
      throw ParseError(order_at.line, order_at.column, "order must be an integer in [0, 64]");
    }
    return v;
  }();
  in.expect_keyword("dim");
  const std::size_t dim_line = in.line();
  const long long dim_value = in.expect_integer("dimension");
  if (dim_value < 1) throw ParseError(dim_line, 1, "dimension must be >= 1");
  const auto n = static_cast<std::size_t>(dim_value);
  const int p = static_cast<int>(order_value);

  in.expect_keyword("representation");
  const Token representation = in.expect("representation");

  if (representation.text == "dense") {
    in.expect_keyword("values");
    std::size_t count = 1;
    for (int i = 0; i < p; ++i) {
      if (count > guard / n) {
        throw ParseError(representation.line, representation.column,
                         "dense kernel exceeds the entry guard");
      }
      count *= n;
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = in.expect_number("kernel entry");
    in.expect_keyword("end");
    in.expect_end_of_input();
    return DenseKernel(p, n, std::move(values), guard);
  }

  if (representation.text == "rank-one") {
    if (p < 1) throw ParseError(order_at.line, order_at.column, "rank-one kernels need order >= 1");
    bool stationary = false;
    Token t = in.expect("'stationary' or 'terms'");
    if (t.text == "stationary") {
      const Token flag = in.expect("stationary flag");
      if (flag.text != "0" && flag.text != "1") {
        throw ParseError(flag.line, flag.column, "stationary flag must be 0 or 1");
      }
      stationary = flag.text == "1";
      t = in.expect("'terms'");
    }
    if (t.text != "terms") {
      throw ParseError(t.line, t.column, "expected 'terms', found '" + std::string(t.text) + "'");
    }
    const std::size_t terms_line = in.line();
    const long long term_count = in.expect_integer("term count");
    if (term_count < 1) throw ParseError(terms_line, 1, "term count must be >= 1");
    std::vector<RankOneSumKernel::Term> terms(static_cast<std::size_t>(term_count));
    for (auto& term : terms) {
      in.expect_keyword("term");
      term.coefficient = in.expect_number("term coefficient");
      term.vector.resize(n);
      for (double& x : term.vector) x = in.expect_number("vector component");
    }
    in.expect_keyword("end");
    in.expect_end_of_input();
    return RankOneSumKernel(p, n, std::move(terms), stationary);
  }

  throw ParseError(representation.line, representation.column,
                   "unknown representation '" + std::string(representation.text) +
                       "' (expected dense or rank-one)");
}

}  // namespace chaosclt
