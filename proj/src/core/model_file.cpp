#include "regen/model_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "regen/error.hpp"

namespace regen {

namespace {

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  std::string out(line.substr(0, hash));
  const auto first = out.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(" \t\r");
  return out.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

std::vector<double> parse_numbers(std::string_view text, std::size_t line_no) {
  std::vector<double> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      parse_fail(line_no, "not a number: '" + token + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

ModelFile parse_model_text(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = text.find('\n', pos);
      const auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
      ++line_no;
      auto clean = strip_comment(raw);
      if (!clean.empty()) lines.emplace_back(line_no, std::move(clean));
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  }
  if (lines.empty()) fail(ErrorCode::ParseError, "empty model file");

  const auto header = parse_numbers(lines[0].second, lines[0].first);
  if (header.size() != 1 || header[0] < 1 || header[0] != static_cast<double>(static_cast<std::size_t>(header[0]))) {
    parse_fail(lines[0].first, "first line must be the state count S");
  }
  const auto s = static_cast<std::size_t>(header[0]);
  if (lines.size() < s + 1) fail(ErrorCode::ParseError, "expected " + std::to_string(s) + " matrix rows");

  Matrix p(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t r = 0; r < s; ++r) {
    const auto& [line_no, content] = lines[r + 1];
    const auto row = parse_numbers(content, line_no);
    if (row.size() != s) parse_fail(line_no, "matrix row needs " + std::to_string(s) + " entries");
    for (std::size_t c = 0; c < s; ++c) p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }

  std::optional<std::vector<bool>> members;
  std::optional<double> beta;
  std::optional<Vector> nu;
  for (std::size_t i = s + 1; i < lines.size(); ++i) {
    const auto& [line_no, content] = lines[i];
    const auto colon = content.find(':');
    if (colon == std::string::npos) parse_fail(line_no, "expected 'J:', 'beta:' or 'nu:'");
    const std::string key = strip_comment(content.substr(0, colon));
    const auto values = parse_numbers(content.substr(colon + 1), line_no);
    if (key == "J") {
      std::vector<bool> mask(s, false);
      for (double v : values) {
        if (v < 0 || v >= static_cast<double>(s) || v != static_cast<double>(static_cast<std::size_t>(v))) {
          parse_fail(line_no, "J lists an invalid state index");
        }
        mask[static_cast<std::size_t>(v)] = true;
      }
      members = std::move(mask);
    } else if (key == "beta") {
      if (values.size() != 1) parse_fail(line_no, "beta takes one value");
      beta = values[0];
    } else if (key == "nu") {
      if (values.size() != s) parse_fail(line_no, "nu needs " + std::to_string(s) + " entries");
      nu = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(s));
    } else {
      parse_fail(line_no, "unknown key '" + key + "'");
    }
  }

  FiniteKernel kernel(std::move(p));
  const int given = int(members.has_value()) + int(beta.has_value()) + int(nu.has_value());
  if (given == 0) return {std::move(kernel), std::nullopt};
  if (given != 3) fail(ErrorCode::ParseError, "J, beta and nu must be given together");
  return {std::move(kernel), SmallSet(std::move(*members), *beta, std::move(*nu))};
}

ModelFile load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_text(buffer.str());
}

std::string format_model_text(const FiniteKernel& kernel, const SmallSet* small_set) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t s = kernel.states();
  out << s << '\n';
  for (std::size_t x = 0; x < s; ++x) {
    for (std::size_t y = 0; y < s; ++y) out << (y ? " " : "") << kernel(x, y);
    out << '\n';
  }
  if (small_set != nullptr) {
    out << "J:";
    for (std::size_t x = 0; x < s; ++x) {
      if (small_set->contains(x)) out << ' ' << x;
    }
    out << "\nbeta: " << small_set->beta() << "\nnu:";
    for (std::size_t x = 0; x < s; ++x) out << ' ' << small_set->nu()[static_cast<Eigen::Index>(x)];
    out << '\n';
  }
  return out.str();
}

}  // namespace regen
