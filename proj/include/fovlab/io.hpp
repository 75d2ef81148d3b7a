#pragma once

// Matrix files.
//
//   Matrix Market: "%%MatrixMarket matrix {array|coordinate} {complex|real|integer} general".
//                  Array data is column-major, coordinate indices are 1-based.
//   JSON:          {"n": <int>, "entries": [[re, im], ...]} with entries row-major.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fovlab/matcore.hpp"

namespace fovlab {

enum class MatrixFormat { MatrixMarket, Json };

inline MatrixFormat format_from_name(std::string_view name) {
  if (name == "json") return MatrixFormat::Json;
  if (name == "mm" || name == "mtx" || name == "matrix-market") return MatrixFormat::MatrixMarket;
  throw Error(ErrorCode::InvalidArgument, "unknown matrix format '" + std::string(name) + "'");
}

/// By extension: .json is JSON, anything else Matrix Market.
inline MatrixFormat format_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot != std::string_view::npos && path.substr(dot) == ".json") return MatrixFormat::Json;
  return MatrixFormat::MatrixMarket;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string r(s);
  for (char& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return r;
}

inline double parse_double(const Token& t, std::size_t line) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ParseError("expected a finite number, got '" + std::string(t.text) + "'", line, t.column);
  return v;
}

inline long long parse_int(const Token& t, std::size_t line) {
  long long v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("expected an integer, got '" + std::string(t.text) + "'", line, t.column);
  return v;
}

}  // namespace detail

inline Matrix read_matrix_market(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    const std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, stop - start));
    start = stop + 1;
  }
  if (lines.empty() || lines[0].rfind("%%MatrixMarket", 0) != 0)
    throw ParseError("missing %%MatrixMarket banner", 1, 1);

  const auto banner = detail::split_tokens(lines[0]);
  if (banner.size() != 5) throw ParseError("banner needs 5 fields", 1, 1);
  if (detail::lower(banner[1].text) != "matrix")
    throw ParseError("only 'matrix' objects are supported", 1, banner[1].column);
  const std::string layout = detail::lower(banner[2].text);
  if (layout != "array" && layout != "coordinate")
    throw ParseError("layout must be array or coordinate", 1, banner[2].column);
  const std::string field = detail::lower(banner[3].text);
  if (field != "complex" && field != "real" && field != "integer")
    throw ParseError("field must be complex, real or integer", 1, banner[3].column);
  if (detail::lower(banner[4].text) != "general")
    throw ParseError("only 'general' symmetry is supported", 1, banner[4].column);
  const bool isComplex = field == "complex";
  const std::size_t valueTokens = isComplex ? 2 : 1;

  std::size_t li = 1;
  auto next_data_line = [&]() -> std::vector<detail::Token> {
    while (li < lines.size()) {
      const std::string_view l = lines[li++];
      if (l.empty() || l[0] == '%') continue;
      auto toks = detail::split_tokens(l);
      if (!toks.empty()) return toks;
    }
    return {};
  };

  const auto sizeLine = next_data_line();
  const std::size_t sizeLineNo = li;
  if (sizeLine.size() != (layout == "array" ? 2u : 3u))
    throw ParseError("malformed size line", sizeLineNo, 1);
  const long long rows = detail::parse_int(sizeLine[0], sizeLineNo);
  const long long cols = detail::parse_int(sizeLine[1], sizeLineNo);
  if (rows <= 0 || cols <= 0) throw ParseError("dimensions must be positive", sizeLineNo, 1);
  if (rows != cols)
    throw Error(ErrorCode::NonSquare,
                "matrix is " + std::to_string(rows) + "x" + std::to_string(cols));

  Matrix a = Matrix::Zero(rows, cols);
  auto read_value = [&](const std::vector<detail::Token>& toks, std::size_t offset,
                        std::size_t lineNo) {
    const double re = detail::parse_double(toks[offset], lineNo);
    const double im = isComplex ? detail::parse_double(toks[offset + 1], lineNo) : 0.0;
    return Complex(re, im);
  };

  if (layout == "array") {
    for (long long j = 0; j < cols; ++j)
      for (long long i = 0; i < rows; ++i) {
        const auto toks = next_data_line();
        if (toks.empty()) throw ParseError("unexpected end of data", li, 1);
        if (toks.size() != valueTokens)
          throw ParseError("expected " + std::to_string(valueTokens) + " values", li, 1);
        a(i, j) = read_value(toks, 0, li);
      }
  } else {
    const long long nnz = detail::parse_int(sizeLine[2], sizeLineNo);
    if (nnz < 0) throw ParseError("negative entry count", sizeLineNo, sizeLine[2].column);
    for (long long k = 0; k < nnz; ++k) {
      const auto toks = next_data_line();
      if (toks.empty()) throw ParseError("unexpected end of data", li, 1);
      if (toks.size() != 2 + valueTokens)
        throw ParseError("expected row, column and " + std::to_string(valueTokens) + " values", li,
                         1);
      const long long i = detail::parse_int(toks[0], li);
      const long long j = detail::parse_int(toks[1], li);
      if (i < 1 || i > rows) throw ParseError("row index out of range", li, toks[0].column);
      if (j < 1 || j > cols) throw ParseError("column index out of range", li, toks[1].column);
      a(i - 1, j - 1) += read_value(toks, 2, li);
    }
  }
  if (!next_data_line().empty()) throw ParseError("trailing data after matrix entries", li, 1);
  return a;
}

inline Matrix read_json_matrix(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    throw ParseError("JSON matrix needs keys 'n' and 'entries'", 1, 1);
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0)
    throw ParseError("'n' must be a positive integer", 1, 1);
  const auto n = static_cast<Index>(doc["n"].get<long long>());
  const auto& entries = doc["entries"];
  if (!entries.is_array()) throw ParseError("'entries' must be an array", 1, 1);
  if (static_cast<Index>(entries.size()) != n * n)
    throw Error(ErrorCode::NonSquare, "'entries' has " + std::to_string(entries.size()) +
                                          " values, expected n*n = " + std::to_string(n * n));
  Matrix a(n, n);
  for (Index k = 0; k < n * n; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("entry " + std::to_string(k) + " must be [re, im]", 1, 1);
    a(k / n, k % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return a;
}

inline std::string write_json_matrix(const Matrix& a) {
  require_square(a, "write_json_matrix");
  nlohmann::json doc;
  doc["n"] = a.rows();
  nlohmann::json entries = nlohmann::json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) entries.push_back({a(i, j).real(), a(i, j).imag()});
  doc["entries"] = std::move(entries);
  return doc.dump() + "\n";
}

inline std::string write_matrix_market(const Matrix& a) {
  require_square(a, "write_matrix_market");
  std::string out = "%%MatrixMarket matrix array complex general\n";
  out += std::to_string(a.rows()) + " " + std::to_string(a.cols()) + "\n";
  char buf[80];
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a(i, j).real(), a(i, j).imag());
      out += buf;
    }
  return out;
}

inline Matrix read_matrix(std::string_view text, MatrixFormat format) {
  Matrix a = format == MatrixFormat::Json ? read_json_matrix(text) : read_matrix_market(text);
  require_square(a, "read_matrix");
  return a;
}

inline std::string write_matrix(const Matrix& a, MatrixFormat format) {
  return format == MatrixFormat::Json ? write_json_matrix(a) : write_matrix_market(a);
}

inline Matrix parse_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_matrix(ss.str(), format);
}

inline Matrix parse_matrix(const std::string& path) {
  return parse_matrix(path, format_from_path(path));
}

}  // namespace fovlab
