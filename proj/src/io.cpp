#include "kelly/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kelly/errors.hpp"

namespace kelly {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

double need_double(const std::string& tok, const std::string& path, std::size_t line,
                   const std::string& what) {
  double v;
  if (!parse_double(tok, v) || !std::isfinite(v))
    throw ParseError(path, line, "bad " + what + " '" + tok + "'");
  return v;
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::string t = trim(text);
    if (t.empty() || t[0] == '#') continue;
    out.push_back({number, t});
  }
  return out;
}

Distribution normalize_probs(std::vector<double> v, const std::string& path,
                             std::size_t line) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) throw ParseError(path, line, "negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "probabilities sum to " << sum << ", not 1";
    throw ParseError(path, line, os.str());
  }
  for (double& x : v) x /= sum;
  return Distribution(v);
}

}  // namespace

MarketFile load_market_csv(const std::string& path) {
  std::vector<Line> lines = read_lines(path);
  if (lines.empty()) throw ParseError(path, 0, "empty market file");

  std::vector<std::string> header = split_csv(lines[0].text);
  if (header.size() < 2 || lower(header[0]) != "outcome")
    throw ParseError(path, lines[0].number, "header must be outcome,<asset names...>[,prob]");
  bool has_prob = lower(header.back()) == "prob";
  std::vector<std::string> asset_names(header.begin() + 1,
                                       header.end() - (has_prob ? 1 : 0));
  const std::size_t k = asset_names.size();
  if (k == 0) throw ParseError(path, lines[0].number, "no asset columns");

  std::vector<std::string> outcome_names;
  std::vector<double> entries;
  std::vector<double> probs;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::vector<std::string> cells = split_csv(lines[li].text);
    std::size_t want = 1 + k + (has_prob ? 1 : 0);
    if (cells.size() != want) {
      std::ostringstream os;
      os << "expected " << want << " fields, got " << cells.size();
      throw ParseError(path, lines[li].number, os.str());
    }
    outcome_names.push_back(cells[0]);
    for (std::size_t i = 0; i < k; ++i) {
      double v = need_double(cells[1 + i], path, lines[li].number, "price relative");
      if (v < 0.0)
        throw ParseError(path, lines[li].number,
                         "negative price relative for asset '" + asset_names[i] + "'");
      entries.push_back(v);
    }
    if (has_prob)
      probs.push_back(need_double(cells.back(), path, lines[li].number, "probability"));
  }
  if (outcome_names.empty()) throw ParseError(path, 0, "market has no outcome rows");

  MarketFile out{[&] {
                   try {
                     return Market(outcome_names.size(), k, entries, outcome_names,
                                   asset_names);
                   } catch (const std::invalid_argument& e) {
                     throw ParseError(path, 0, e.what());
                   }
                 }(),
                 std::nullopt};
  if (has_prob) out.probs = normalize_probs(probs, path, 0);
  return out;
}

Distribution load_distribution(const std::string& path_or_inline, std::size_t m) {
  std::string content;
  std::string origin;
  std::ifstream in(path_or_inline);
  if (in) {
    std::ostringstream os;
    os << in.rdbuf();
    content = os.str();
    origin = path_or_inline;
  } else {
    content = path_or_inline;
    origin = "<inline>";
  }

  std::vector<double> v;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    double x;
    if (!parse_double(tok, x) || !std::isfinite(x))
      throw ParseError(origin, 0, "bad probability '" + tok + "'");
    v.push_back(x);
    tok.clear();
  };
  for (char c : content) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      tok.push_back(c);
  }
  flush();

  if (v.size() != m) {
    std::ostringstream os;
    os << "expected " << m << " probabilities, got " << v.size();
    throw ParseError(origin, 0, os.str());
  }
  return normalize_probs(std::move(v), origin, 0);
}

std::vector<std::size_t> load_outcome_sequence(const std::string& path,
                                               const Market& market) {
  std::vector<Line> lines = read_lines(path);
  std::vector<std::size_t> out;
  for (const Line& ln : lines) {
    std::string tok;
    auto flush = [&] {
      if (tok.empty()) return;
      for (std::size_t j = 0; j < market.num_outcomes(); ++j) {
        if (market.outcome_names()[j] == tok) {
          out.push_back(j);
          tok.clear();
          return;
        }
      }
      std::size_t idx;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() ||
          idx >= market.num_outcomes())
        throw ParseError(path, ln.number, "unknown outcome '" + tok + "'");
      out.push_back(idx);
      tok.clear();
    };
    for (char c : ln.text) {
      if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
        flush();
      else
        tok.push_back(c);
    }
    flush();
  }
  if (out.empty()) throw ParseError(path, 0, "empty outcome sequence");
  return out;
}

std::vector<Distribution> load_family_csv(const std::string& path, std::size_t m) {
  std::vector<Line> lines = read_lines(path);
  std::vector<Distribution> out;
  for (const Line& ln : lines) {
    std::vector<std::string> cells = split_csv(ln.text);
    if (cells.size() != m) {
      std::ostringstream os;
      os << "expected " << m << " probabilities, got " << cells.size();
      throw ParseError(path, ln.number, os.str());
    }
    std::vector<double> v;
    for (const std::string& c : cells)
      v.push_back(need_double(c, path, ln.number, "probability"));
    out.push_back(normalize_probs(std::move(v), path, ln.number));
  }
  if (out.empty()) throw ParseError(path, 0, "empty family file");
  return out;
}

PortfolioConstraints load_constraints_csv(const std::string& path, std::size_t k) {
  std::vector<Line> lines = read_lines(path);
  std::vector<LinearInequality> ineqs;
  std::vector<LinearEquality> eqs;
  for (const Line& ln : lines) {
    std::vector<std::string> cells = split_csv(ln.text);
    if (cells.size() != k + 2) {
      std::ostringstream os;
      os << "expected " << (k + 2) << " fields (relation, " << k << " coefficients, rhs)";
      throw ParseError(path, ln.number, os.str());
    }
    std::string rel = lower(cells[0]);
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < k; ++i)
      coeffs.push_back(need_double(cells[1 + i], path, ln.number, "coefficient"));
    double rhs = need_double(cells.back(), path, ln.number, "right-hand side");
    if (rel == "le") {
      ineqs.push_back({coeffs, rhs});
    } else if (rel == "ge") {
      for (double& c : coeffs) c = -c;
      ineqs.push_back({coeffs, -rhs});
    } else if (rel == "eq") {
      eqs.push_back({coeffs, rhs});
    } else {
      throw ParseError(path, ln.number, "relation must be le, ge or eq, got '" + cells[0] + "'");
    }
  }
  return PortfolioConstraints(k, ineqs, eqs);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_market_csv(const Market& market, const Distribution* probs) {
  std::ostringstream os;
  os << "outcome";
  for (std::size_t i = 0; i < market.num_assets(); ++i)
    os << ',' << market.asset_names()[i];
  if (probs) os << ",prob";
  os << '\n';
  for (std::size_t j = 0; j < market.num_outcomes(); ++j) {
    os << market.outcome_names()[j];
    for (std::size_t i = 0; i < market.num_assets(); ++i)
      os << ',' << format_double(market.at(j, i));
    if (probs) os << ',' << format_double((*probs)[j]);
    os << '\n';
  }
  return os.str();
}

}  // namespace kelly
