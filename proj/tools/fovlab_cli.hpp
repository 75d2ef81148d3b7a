#pragma once

// Command-line front end. run() is the whole program; main.cpp only forwards
// argv so that the test suite can drive commands in-process.
//
// Exit codes: 0 ok, 1 usage, 2 parse, 3 numerical or verification failure.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fovlab/fovlab.hpp"

namespace fovlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kCsvVersion = "fovlab-csv 1";
inline constexpr const char* kVerifyVersion = "fovlab-verify 1";
inline constexpr const char* kMatrixVersion = "fovlab-matrix 1";
inline constexpr double kDefaultTol = 1e-8;
inline constexpr int kCourantFischerTrials = 20;
inline constexpr double kStationarityStep = 1e-5;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string fmt_complex(Complex z) {
  std::string s = fmt(z.real());
  s += (std::signbit(z.imag()) ? "-" : "+");
  s += fmt(std::abs(z.imag())) + "i";
  return s;
}

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i".
inline Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw UsageError("empty complex number");
  auto number = [&](std::string_view part, double unit) {
    if (part.empty() || part == "+") return unit;
    if (part == "-") return -unit;
    if (part.front() == '+') part.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(v))
      throw UsageError("malformed complex number '" + std::string(text) + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s, 1.0), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, number(s, 1.0)};
  return {number(std::string_view(s).substr(0, split), 1.0),
          number(std::string_view(s).substr(split), 1.0)};
}

inline std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw UsageError("--spectrum needs at least one value");
  return out;
}

struct RunConfig {
  std::string command;
  std::string in;
  std::string format;  // "" means by extension
  std::string out;
  std::string svg;
  int angles = kDefaultAngles;
  int samples = 1000;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  double condLimit = kCondLimit;
  bool metricFromEigenbasis = false;
  std::string metricFile;
  bool json = false;
  std::string spectrum;
  double cond = 1.0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    if (command == "gen") {
      j["spectrum"] = spectrum;
      j["cond"] = cond;
      j["seed"] = seed;
      return j;
    }
    j["in"] = in;
    j["format"] = format.empty() ? "auto" : format;
    j["angles"] = angles;
    j["samples"] = samples;
    j["seed"] = seed;
    j["tol"] = tol;
    j["cond-limit"] = condLimit;
    if (command == "givens")
      j["metric"] = metricFromEigenbasis ? std::string("eigenbasis") : "file:" + metricFile;
    return j;
  }

  /// Single-line form for text headers.
  std::string header() const { return to_json().dump(); }
};

// ---------------------------------------------------------------------------
// Output

struct Row {
  Complex z;
  const char* kind;
};

inline std::string render_csv(const RunConfig& cfg, const std::vector<Row>& rows) {
  std::string s = std::string("# ") + kCsvVersion + "\n# config " + cfg.header() + "\nre,im,kind\n";
  for (const Row& r : rows) s += fmt(r.z.real()) + "," + fmt(r.z.imag()) + "," + r.kind + "\n";
  return s;
}

inline std::string render_svg(const RunConfig& cfg, const Polygon& poly,
                              const std::vector<Complex>& eigenvalues,
                              const std::vector<Complex>& samples) {
  constexpr double size = 600.0;
  const auto [xlo, xhi] = poly.real_extent();
  const auto [ylo, yhi] = poly.imag_extent();
  double span = std::max(xhi - xlo, yhi - ylo);
  if (!(span > 1e-12 * poly.scale())) span = 1e-3 * poly.scale();
  span *= 1.2;  // 10% margin on each side
  const double cx = 0.5 * (xlo + xhi);
  const double cy = 0.5 * (ylo + yhi);
  auto px = [&](Complex z) { return (z.real() - cx) / span * size + size / 2; };
  auto py = [&](Complex z) { return size / 2 - (z.imag() - cy) / span * size; };
  char buf[200];
  std::string s =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" "
      "viewBox=\"0 0 600 600\">\n";
  s += "<!-- " + std::string(kCsvVersion) + " " + cfg.header() + " -->\n";
  s += "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  s += "<polygon fill=\"#dde8f5\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" points=\"";
  for (const Complex& v : poly.vertices()) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(v), py(v));
    s += buf;
  }
  s += "\"/>\n";
  for (const Complex& z : samples) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"1.2\" fill=\"#555\"/>\n",
                  px(z), py(z));
    s += buf;
  }
  for (const Complex& z : eigenvalues) {
    const double x = px(z), y = py(z);
    std::snprintf(buf, sizeof buf,
                  "<path d=\"M%.3f %.3fL%.3f %.3fM%.3f %.3fL%.3f %.3f\" stroke=\"#c0392b\" "
                  "stroke-width=\"2\"/>\n",
                  x - 5, y - 5, x + 5, y + 5, x - 5, y + 5, x + 5, y - 5);
    s += buf;
  }
  s += "</svg>\n";
  return s;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

inline Matrix load_input(const RunConfig& cfg) {
  if (cfg.in.empty()) throw UsageError("--in is required");
  const MatrixFormat f = cfg.format.empty() ? format_from_path(cfg.in) : format_from_name(cfg.format);
  return parse_matrix(cfg.in, f);
}

inline void emit_region(const RunConfig& cfg, const Polygon& poly, const std::vector<Complex>& eigs,
                        const std::vector<Complex>& samples, std::ostream& out) {
  std::vector<Row> rows;
  for (const Complex& v : poly.vertices()) rows.push_back({v, "boundary-vertex"});
  for (const Complex& l : eigs) rows.push_back({l, "eigenvalue"});
  for (const Complex& s : samples) rows.push_back({s, "sample"});
  write_text(cfg.out, render_csv(cfg, rows), out);
  if (!cfg.svg.empty()) {
    std::ofstream f(cfg.svg, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + cfg.svg + "'");
    f << render_svg(cfg, poly, eigs, samples);
  }
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_fov(const RunConfig& cfg, std::ostream& out) {
  const Matrix a = load_input(cfg);
  emit_region(cfg, fov_boundary(a, cfg.angles), eigenvalues(a), {}, out);
  return kExitOk;
}

inline int cmd_gfov(const RunConfig& cfg, std::ostream& out) {
  const Matrix a = load_input(cfg);
  GfovOptions opt;
  opt.condLimit = cfg.condLimit;
  opt.crossCheckAngles = cfg.angles;
  opt.nSamples = 0;
  const GfovResult g = gfov(a, opt);
  const auto samples = gfov_samples(a, g.eigSystem, cfg.samples, cfg.seed);
  const auto& l = g.eigSystem.values();
  emit_region(cfg, g.polygon, {l.begin(), l.end()}, samples, out);
  return kExitOk;
}

inline int cmd_givens(const RunConfig& cfg, std::ostream& out) {
  if (cfg.metricFromEigenbasis == !cfg.metricFile.empty())
    throw UsageError("givens needs exactly one of --metric-from-eigenbasis or --metric-file");
  const Matrix a = load_input(cfg);
  std::optional<Metric> metric;
  if (cfg.metricFromEigenbasis) {
    metric = eig(a, cfg.condLimit).metric();
  } else {
    const Matrix h = parse_matrix(cfg.metricFile);
    require_dim(h.rows(), a.rows(), "givens");
    metric = Metric::from_hpd(h);
  }
  emit_region(cfg, givens_fov_boundary(a, *metric, cfg.angles), eigenvalues(a), {}, out);
  return kExitOk;
}

struct VerifyLine {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double gap = 0.0;
  double threshold = 0.0;
  std::string note;
};

inline VerifyLine judged(std::string name, double gap, double threshold, bool structural = true,
                         std::string note = {}) {
  VerifyLine l{std::move(name), CheckStatus::Failed, gap, threshold, std::move(note)};
  if (structural && gap <= threshold) l.status = CheckStatus::Passed;
  return l;
}

inline VerifyLine skipped(std::string name, std::string note) {
  return VerifyLine{std::move(name), CheckStatus::Skipped, 0.0, 0.0, std::move(note)};
}

inline bool is_real_matrix(const Matrix& a) { return a.imag().cwiseAbs().maxCoeff() == 0.0; }

/// Every check compares a measured gap against a base threshold multiplied
/// by tol / 1e-8, so --tol tightens or loosens the whole suite at once.
inline std::vector<VerifyLine> run_checks(const Matrix& a, const RunConfig& cfg) {
  const double factor = cfg.tol / kDefaultTol;
  const Index n = a.rows();
  const EigenSystem e = eig(a, cfg.condLimit);
  const double scale = spectral_scale(e.values());
  const double aNorm = std::max(a.norm(), 1e-300);
  std::vector<VerifyLine> lines;

  // Hull of the spectrum against the Givens sweep and definitional samples.
  {
    const Polygon poly = hull(e.values());
    const double gap = hausdorff(poly, givens_fov_boundary(a, e.metric(), cfg.angles));
    lines.push_back(judged("givens-route", gap, factor * cross_check_tolerance(e)));
    double worst = 0.0;
    for (const Complex& s : gfov_samples(a, e, cfg.samples, cfg.seed))
      worst = std::max(worst, poly.distance(s));
    lines.push_back(judged("samples-inside", worst, factor * sample_tolerance(e)));
  }

  const Complex alpha(2.0, 1.0);
  const PropertyReport props = verify_gfov_properties(a, alpha, cfg.tol, 2 * cfg.angles, cfg.condLimit);
  for (const PropertyCheck& c : props.checks) {
    if (c.status == CheckStatus::Skipped)
      lines.push_back(skipped(c.name, c.note));
    else
      lines.push_back(judged(c.name, c.gap, c.threshold));
  }

  {
    double gap = 0.0;
    const Matrix vl = left_eigenvectors(e);
    for (Index i = 0; i < n; ++i) {
      const Complex l = e.value(i);
      const Vector vr = e.right().col(i);
      gap = std::max({gap, std::abs(rq(vr, a) - l), std::abs(rq_naive(vl.col(i), vr, a) - l),
                      std::abs(rq_gen(vr, a, e).value - l)});
    }
    lines.push_back(judged("eigenpair-quotients", gap, factor * 0.1 * e.cond() * scale));
  }

  {
    double gap = 0.0, thr = 0.0;
    bool structural = true;
    for (std::uint64_t t = 0; t < 5; ++t) {
      Rng rng = derived_rng(cfg.seed, 1000 + t);
      const MinResidualReport r = min_residual_check(random_vector(n, rng), a, e);
      for (const MinResidualForm* f : {&r.right, &r.left}) {
        gap = std::max({gap, std::abs(f->gapAtRho), -f->worstGap});
        structural = structural && f->gridArgmin == f->nearestToRho;
      }
      thr = std::max(thr, r.tol);
    }
    lines.push_back(judged("min-residual", gap, factor * 100.0 * thr, structural));
  }

  const bool realSpectrum = is_real_spectrum(e, kRealSpectrumTol);
  if (is_real_matrix(a)) {
    const RealMatrix ar = a.real();
    double gap = 0.0, thr = 0.0;
    bool structural = true;
    for (std::uint64_t t = 0; t < 5; ++t) {
      Rng rng = derived_rng(cfg.seed, 2000 + t);
      const RealVector x = random_real_vector(n, rng);
      const RealVector y = x + 0.3 * random_real_vector(n, rng);
      const MinInnerProductReport r = min_inner_product_check(y, x, ar);
      gap = std::max({gap, std::abs(r.gapAtRho), -r.worstGap});
      structural = structural && r.gridArgmin == r.nearestToRho;
      thr = std::max(thr, r.tol);
    }
    lines.push_back(judged("min-inner-product", gap, factor * 100.0 * thr, structural));
  } else {
    lines.push_back(skipped("min-inner-product", "matrix is not real"));
  }

  {
    double gap = 0.0;
    const Matrix vl = left_eigenvectors(e);
    for (Index i = 0; i < n; ++i)
      gap = std::max(gap, stationarity_gradient(vl.col(i), e.right().col(i), a, kStationarityStep));
    lines.push_back(judged("stationarity", gap, factor * 1e5 * aNorm));
  }

  if (realSpectrum) {
    const double lmax = std::max(std::abs(e.value(0).real()), std::abs(e.value(n - 1).real()));
    const double thr = factor * variational_tolerance(lmax, e.cond());
    try {
      const RitzExtrema r = rayleigh_ritz_extrema(a, e, cfg.samples, cfg.seed);
      const double gap = std::max({std::abs(r.lambdaMin - e.value(0).real()),
                                   std::abs(r.lambdaMax - e.value(n - 1).real()), r.worstExcess});
      lines.push_back(judged("rayleigh-ritz", gap, thr));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::SandwichViolation) throw;
      lines.push_back(judged("rayleigh-ritz", std::numeric_limits<double>::infinity(), thr, false,
                             err.what()));
    }

    double worstRatio = -std::numeric_limits<double>::infinity();
    double gap = 0.0, thrAtWorst = 0.0;
    for (Index j = 1; j <= n; ++j) {
      const CourantFischerReport r = courant_fischer_verify(a, e, j, kCourantFischerTrials, cfg.seed);
      for (const MinMaxReport* m : {&r.minMax, &r.maxMin}) {
        const double g = std::max(m->worst_crossing(), std::abs(m->achievedAtEigenspan - m->lambdaJ));
        const double ratio = g / m->tol;
        if (ratio > worstRatio) {
          worstRatio = ratio;
          gap = g;
          thrAtWorst = factor * m->tol;
        }
      }
    }
    lines.push_back(judged("courant-fischer", gap, thrAtWorst));
  } else {
    lines.push_back(skipped("rayleigh-ritz", "spectrum is not real"));
    lines.push_back(skipped("courant-fischer", "spectrum is not real"));
  }
  return lines;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Matrix a = load_input(cfg);
  const auto lines = run_checks(a, cfg);
  int passed = 0, failed = 0, skippedCount = 0;
  for (const auto& l : lines) {
    if (l.status == CheckStatus::Passed) ++passed;
    if (l.status == CheckStatus::Failed) ++failed;
    if (l.status == CheckStatus::Skipped) ++skippedCount;
  }
  std::string text;
  if (cfg.json) {
    nlohmann::ordered_json doc;
    doc["format"] = kVerifyVersion;
    doc["config"] = cfg.to_json();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& l : lines) {
      nlohmann::ordered_json c;
      c["name"] = l.name;
      c["status"] = to_string(l.status);
      if (l.status != CheckStatus::Skipped) {
        c["gap"] = std::isfinite(l.gap) ? nlohmann::ordered_json(l.gap) : nlohmann::ordered_json("inf");
        c["threshold"] = l.threshold;
      }
      if (!l.note.empty()) c["note"] = l.note;
      checks.push_back(std::move(c));
    }
    doc["checks"] = std::move(checks);
    doc["passed"] = failed == 0;
    text = doc.dump(2) + "\n";
  } else {
    text = std::string("# ") + kVerifyVersion + "\n# config " + cfg.header() + "\n";
    for (const auto& l : lines) {
      char buf[256];
      if (l.status == CheckStatus::Skipped)
        std::snprintf(buf, sizeof buf, "%-20s skipped  (%s)\n", l.name.c_str(), l.note.c_str());
      else
        std::snprintf(buf, sizeof buf, "%-20s %-7s  gap=%s threshold=%s\n", l.name.c_str(),
                      to_string(l.status), fmt_short(l.gap).c_str(), fmt_short(l.threshold).c_str());
      text += buf;
    }
    text += "summary: " + std::to_string(passed) + " passed, " + std::to_string(failed) +
            " failed, " + std::to_string(skippedCount) + " skipped\n";
  }
  write_text(cfg.out, text, out);
  return failed == 0 ? kExitOk : kExitNumerical;
}

inline int cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.spectrum.empty()) throw UsageError("gen needs --spectrum");
  const auto spectrum = parse_complex_list(cfg.spectrum);
  const Matrix a = gen_prescribed(spectrum, cfg.cond, cfg.seed);
  const double achieved = eig(a, std::numeric_limits<double>::infinity()).cond();

  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(write_json_matrix(a));
  doc["format"] = kMatrixVersion;
  doc["config"] = cfg.to_json();
  write_text(cfg.out, doc.dump() + "\n", out);
  (cfg.out.empty() || cfg.out == "-" ? err : out) << "achieved condV: " << fmt_short(achieved) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("FOVLAB_SEED");
  if (!s || !*s) return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view sv(s);
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec != std::errc() || ptr != sv.data() + sv.size())
    throw UsageError("FOVLAB_SEED must be a non-negative integer");
  return v;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Fields of values of complex matrices", "fovlab"};
  app.require_subcommand(1);

  auto addInput = [&](CLI::App* sub) {
    sub->add_option("--in", cfg.in, "Matrix file (.json or Matrix Market)")->required();
    sub->add_option("--format", cfg.format, "json | mm (default: by extension)")
        ->check(CLI::IsMember({"json", "mm", "mtx", "matrix-market"}));
    sub->add_option("--out", cfg.out, "Output file (default: stdout)");
    sub->add_option("--angles", cfg.angles, "Supporting-line angles")->check(CLI::Range(3, 1 << 20));
    sub->add_option("--samples", cfg.samples, "Definitional samples")->check(CLI::Range(1, 1 << 24));
    sub->add_option("--seed", cfg.seed, "RNG seed (overrides FOVLAB_SEED)");
    sub->add_option("--tol", cfg.tol, "Base tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--cond-limit", cfg.condLimit, "Largest accepted eigenbasis condition number")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* fov = app.add_subcommand("fov", "Classical field of values F(A) as CSV");
  CLI::App* gfovCmd = app.add_subcommand("gfov", "Generalized field G(A) = hull of the spectrum");
  CLI::App* givens = app.add_subcommand("givens", "Givens field F_H(A)");
  for (CLI::App* sub : {fov, gfovCmd, givens}) {
    addInput(sub);
    sub->add_option("--svg", cfg.svg, "Also render an SVG plot");
  }
  givens->add_flag("--metric-from-eigenbasis", cfg.metricFromEigenbasis, "H = (VV*)^{-1}");
  givens->add_option("--metric-file", cfg.metricFile, "HPD matrix file for H");

  CLI::App* verify = app.add_subcommand("verify", "Run the property suite on a matrix");
  addInput(verify);
  verify->add_flag("--json", cfg.json, "Machine-readable report");

  CLI::App* gen = app.add_subcommand("gen", "Generate a matrix with prescribed spectrum");
  gen->add_option("--spectrum", cfg.spectrum, "Comma-separated eigenvalues, a+bi syntax")->required();
  gen->add_option("--cond", cfg.cond, "Target eigenbasis condition number")->check(CLI::Range(1.0, 1e300));
  gen->add_option("--seed", cfg.seed, "RNG seed (overrides FOVLAB_SEED)");
  gen->add_option("--out", cfg.out, "Output JSON file (default: stdout)");

  std::vector<std::string> argvStore{"fovlab"};
  argvStore.insert(argvStore.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argvStore) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub->count("--seed") == 0)
      if (auto s = env_seed()) cfg.seed = *s;
    if (sub == fov) return cmd_fov(cfg, out);
    if (sub == gfovCmd) return cmd_gfov(cfg, out);
    if (sub == givens) return cmd_givens(cfg, out);
    if (sub == verify) return cmd_verify(cfg, out);
    return cmd_gen(cfg, out, err);
  } catch (const UsageError& e) {
    err << "fovlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "fovlab: parse error at line " << e.line() << ", column " << e.column() << ": "
        << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "fovlab: " << to_string(e.code()) << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::NonSquare) return kExitParse;
    if (e.code() == ErrorCode::InvalidArgument && cfg.command == "gen") return kExitUsage;
    return kExitNumerical;
  }
}

}  // namespace fovlab::cli
