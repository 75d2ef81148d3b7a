#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fovlab/io.hpp"
#include "fovlab/random.hpp"
#include "test_support.hpp"

namespace fovlab::testing {
namespace {

template <class F>
void expect_parse_error(F&& f, std::size_t line, std::size_t column) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.line(), line) << e.what();
    if (column) {
      EXPECT_EQ(e.column(), column) << e.what();
    }
  }
}

template <class F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::string to_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TEST(Json, DiagonalExample) {
  const Matrix a = read_json_matrix(R"({"n":2,"entries":[[1,0],[0,0],[0,0],[2,0]]})");
  EXPECT_EQ(a, diag({1.0, 2.0}));
}

TEST(Json, RowMajorOrder) {
  const Matrix a = read_json_matrix(R"({"n":2,"entries":[[1,0],[2,0],[3,0],[4,-1]]})");
  EXPECT_EQ(a, mat2(1.0, 2.0, 3.0, Complex(4.0, -1.0)));
}

TEST(Json, Errors) {
  expect_parse_error([] { read_json_matrix("{\"n\":2,\n \"entries\": [1,"); }, 2, 0);
  expect_parse_error([] { read_json_matrix(R"({"entries":[]})"); }, 1, 1);
  expect_parse_error([] { read_json_matrix(R"({"n":0,"entries":[]})"); }, 1, 1);
  expect_parse_error([] { read_json_matrix(R"({"n":1,"entries":[[1]]})"); }, 1, 1);
  expect_code([] { read_json_matrix(R"({"n":2,"entries":[[1,0],[0,0],[0,0]]})"); },
              ErrorCode::NonSquare);
}

TEST(MatrixMarket, ArrayComplexHandWritten) {
  const std::string text =
      "%%MatrixMarket matrix array complex general\n"
      "% a comment\n"
      "2 2\n"
      "1 0\n"
      "3 -1\n"
      "2 0.5\n"
      "4 0\n";
  EXPECT_EQ(read_matrix_market(text), mat2(1.0, Complex(2.0, 0.5), Complex(3.0, -1.0), 4.0));
}

TEST(MatrixMarket, CoordinateComplexAndRealAndInteger) {
  const Matrix c = read_matrix_market(
      "%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 2 0 1\n2 1 5 0\n");
  EXPECT_EQ(c, mat2(0.0, Complex(0.0, 1.0), 5.0, 0.0));
  const Matrix r = read_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  EXPECT_EQ(r, mat2(1.0, 3.0, 2.0, 4.0));
  const Matrix i = read_matrix_market(
      "%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 7\n");
  EXPECT_EQ(i(0, 0), Complex(7.0, 0.0));
}

TEST(MatrixMarket, CrlfAndBlankLines) {
  const Matrix a = read_matrix_market(
      "%%MatrixMarket matrix array complex general\r\n\r\n1 1\r\n  2.5   -1 \r\n");
  EXPECT_EQ(a(0, 0), Complex(2.5, -1.0));
}

TEST(MatrixMarket, Errors) {
  expect_parse_error([] { read_matrix_market("hello\n"); }, 1, 1);
  expect_parse_error([] { read_matrix_market("%%MatrixMarket matrix array complex symmetric\n1 1\n1 0\n"); },
                     1, 37);
  expect_parse_error([] { read_matrix_market("%%MatrixMarket matrix array complex general\n1 1\n1 x\n"); },
                     3, 3);
  // Missing entries are reported at the end of the file.
  expect_parse_error([] { read_matrix_market("%%MatrixMarket matrix array complex general\n2 2\n1 0\n"); },
                     4, 1);
  expect_parse_error(
      [] { read_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"); }, 3, 1);
  expect_parse_error(
      [] { read_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1\n2\n"); }, 4, 1);
  expect_code([] { read_matrix_market("%%MatrixMarket matrix array real general\n2 3\n"); },
              ErrorCode::NonSquare);
}

TEST(Formats, Names) {
  EXPECT_EQ(format_from_path("a.json"), MatrixFormat::Json);
  EXPECT_EQ(format_from_path("a.mm"), MatrixFormat::MatrixMarket);
  EXPECT_EQ(format_from_path("a.mtx"), MatrixFormat::MatrixMarket);
  EXPECT_EQ(format_from_name("json"), MatrixFormat::Json);
  EXPECT_EQ(format_from_name("mm"), MatrixFormat::MatrixMarket);
  EXPECT_THROW(format_from_name("csv"), Error);
}

/// Seeded source text in one of several layouts, together with the matrix it
/// encodes.
std::pair<std::string, Matrix> seeded_file(std::uint64_t seed) {
  Rng rng = derived_rng(seed, 0);
  const Index n = 1 + static_cast<Index>(seed % 6);
  Matrix a = random_matrix(n, n, rng);
  const int layout = static_cast<int>(seed % 4);
  if (layout == 2) a = a.real().cast<Complex>();
  std::string s;
  switch (layout) {
    case 0:
      s = write_json_matrix(a);
      break;
    case 1:
      s = "%%MatrixMarket matrix array complex general\n%seed " + std::to_string(seed) + "\n" +
          std::to_string(n) + " " + std::to_string(n) + "\n";
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
          s += "  " + to_text(a(i, j).real()) + "\t" + to_text(a(i, j).imag()) + "\n";
      break;
    case 2:
      s = "%%MatrixMarket matrix coordinate real general\n" + std::to_string(n) + " " +
          std::to_string(n) + " " + std::to_string(n * n) + "\n";
      for (Index i = n; i-- > 0;)
        for (Index j = 0; j < n; ++j)
          s += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " + to_text(a(i, j).real()) + "\n";
      break;
    default:
      s = "%%MatrixMarket matrix coordinate complex general\n" + std::to_string(n) + " " +
          std::to_string(n) + " " + std::to_string(n * n) + "\n";
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
          s += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " + to_text(a(i, j).real()) +
               " " + to_text(a(i, j).imag()) + "\n";
  }
  return {s, a};
}

TEST(RoundTrip, SeededCorpus) {
  const auto dir = std::filesystem::temp_directory_path() / "fovlab_io_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [text, a] = seeded_file(seed);
    const auto path = dir / ("m" + std::to_string(seed) + (seed % 4 == 0 ? ".json" : ".mtx"));
    {
      std::ofstream f(path, std::ios::binary);
      f << text;
    }
    const Matrix parsed = parse_matrix(path.string());
    EXPECT_EQ(parsed, a) << seed;
    // The canonical forms of the file contents.
    const Matrix viaJson = read_json_matrix(write_json_matrix(parsed));
    EXPECT_EQ(viaJson, parsed);
    const Matrix viaMm = read_matrix_market(write_matrix_market(parsed));
    EXPECT_LE(max_abs(viaMm - parsed), 1e-15 * std::max(1.0, max_abs(parsed)));
    EXPECT_EQ(write_matrix(read_matrix(write_matrix(parsed, MatrixFormat::Json), MatrixFormat::Json),
                           MatrixFormat::Json),
              write_json_matrix(parsed));
  }
  std::filesystem::remove_all(dir);
}

TEST(ParseMatrix, MissingFile) {
  expect_code([] { parse_matrix("/nonexistent/fovlab.json"); }, ErrorCode::ParseError);
}

}  // namespace
}  // namespace fovlab::testing
