#include "fracflow/analytic.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fracflow {

namespace {

// Recursive-descent parser for:  expr := [sign] term (('+'|'-') term)*
//                                term := factor ('*' factor)*
//                                factor := number | ('sin'|'cos') '(' [number] var ')'
struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool consume(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw config_error("cannot parse field expression '" + s + "': " + what +
                       " at position " + std::to_string(i));
  }

  double number() {
    skip();
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    i += static_cast<std::size_t>(end - begin);
    return v;
  }

  bool starts_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  AnalyticField::Factor trig() {
    skip();
    AnalyticField::Factor f;
    if (s.compare(i, 3, "sin") == 0)
      f.is_sin = true;
    else if (s.compare(i, 3, "cos") == 0)
      f.is_sin = false;
    else
      fail("expected sin, cos or a number");
    i += 3;
    if (!consume('(')) fail("expected '('");
    f.freq = starts_number() ? number() : 1.0;
    consume('*');  // allow sin(2*x)
    const char v = peek();
    if (v == 'x')
      f.axis = 0;
    else if (v == 'y')
      f.axis = 1;
    else if (v == 'z')
      f.axis = 2;
    else
      fail("expected coordinate x, y or z");
    ++i;
    if (!consume(')')) fail("expected ')'");
    return f;
  }

  AnalyticField::Term term() {
    AnalyticField::Term t;
    bool first = true;
    do {
      if (starts_number())
        t.amp *= number();
      else
        t.factors.push_back(trig());
      first = false;
    } while (consume('*'));
    (void)first;
    return t;
  }
};

}  // namespace

AnalyticField AnalyticField::parse(const std::string& text) {
  AnalyticField out;
  out.text_ = text;
  Cursor c{text};
  if (c.eof()) throw config_error("empty field expression");

  double sign = 1.0;
  if (c.consume('-'))
    sign = -1.0;
  else
    c.consume('+');

  while (true) {
    Term t = c.term();
    t.amp *= sign;
    if (t.amp != 0.0) out.terms_.push_back(std::move(t));
    if (c.eof()) break;
    if (c.consume('+'))
      sign = 1.0;
    else if (c.consume('-'))
      sign = -1.0;
    else
      c.fail("expected '+', '-' or end of expression");
  }
  return out;
}

double AnalyticField::eval(double x, double y, double z) const {
  const double xyz[3] = {x, y, z};
  double acc = 0.0;
  for (const Term& t : terms_) {
    double v = t.amp;
    for (const Factor& f : t.factors) {
      const double arg = f.freq * xyz[f.axis];
      v *= f.is_sin ? std::sin(arg) : std::cos(arg);
    }
    acc += v;
  }
  return acc;
}

ScalarField AnalyticField::sample(const GridSpec& grid) const {
  ScalarField out(grid);
  const int n = grid.n;
  if (grid.ndim == 1) {
    for (int i = 0; i < n; ++i) out[i] = eval(grid.coord(i));
  } else if (grid.ndim == 2) {
    for (int i = 0; i < n; ++i) {
      const double x = grid.coord(i);
      for (int j = 0; j < n; ++j) out[out.flat(i, j)] = eval(x, grid.coord(j));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double x = grid.coord(i);
      for (int j = 0; j < n; ++j) {
        const double y = grid.coord(j);
        for (int k = 0; k < n; ++k) out[out.flat(i, j, k)] = eval(x, y, grid.coord(k));
      }
    }
  }
  return out;
}

}  // namespace fracflow
