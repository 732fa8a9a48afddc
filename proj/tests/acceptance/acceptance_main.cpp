// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "cli.hpp"

#include "hcr/csv_input.hpp"
#include "hcr/density.hpp"
#include "hcr/model.hpp"
#include "hcr/report.hpp"

#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace hcr;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

int failures = 0;

void
check(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body)
{
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = { false, std::string("exception: ") + e.what() };
  }
  const double seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < limit_seconds;
  const bool pass = o.pass && in_time;
  failures += pass ? 0 : 1;
  std::printf("ACCEPTANCE %d %s: %s; %s (%.2f s, limit %.0f s%s)\n", id, pass ? "PASS" : "FAIL",
              title, o.detail.c_str(), seconds, limit_seconds, in_time ? "" : ", too slow");
  std::fflush(stdout);
}

std::string
fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

int
run_cli(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int rc = cli::run(args, out, err);
  if (rc != 0)
    std::printf("  cli error: %s", err.str().c_str());
  return rc;
}

std::map<std::string, std::string>
directory_bytes(const fs::path& dir)
{
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    files[e.path().filename().string()] = read_file(e.path());
  return files;
}

} // namespace

int
main()
{
  const fs::path work = fs::temp_directory_path() / "hcr_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  check(1, "orthonormality j,k <= 12 on 64-node Gauss-Legendre", 1.0, [] {
    const auto rule = oracle::gauss_legendre_01(64);
    double worst = 0.0;
    for (int j = 0; j <= 12; ++j)
      for (int k = 0; k <= 12; ++k) {
        double s = 0.0;
        for (std::size_t p = 0; p < rule.nodes.size(); ++p)
          s += rule.weights[p] * poly_1d(j, rule.nodes[p]) * poly_1d(k, rule.nodes[p]);
        worst = std::max(worst, std::abs(s - (j == k ? 1.0 : 0.0)));
      }
    return Outcome{ worst <= 1e-9, fmt("max |<f_j,f_k> - delta| = %.3g (tol 1e-9)", worst) };
  });

  check(2, "closed-form polynomials j <= 5 at 101 points", 1.0, [] {
    double worst = 0.0;
    for (int j = 0; j <= 5; ++j)
      for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        const double want = oracle::explicit_poly(j, x);
        const double got = poly_1d(j, x);
        // exact zeros (x = 1/2 for odd j) are compared absolutely
        const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
        worst = std::max(worst, err);
      }
    return Outcome{ worst <= 1e-10, fmt("max relative deviation %.3g (tol 1e-10)", worst) };
  });

  check(3, "estimation normalization", 1.0, [] {
    double worst_a0 = 0.0;
    double worst_integral = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Matrix s = oracle::uniform_sample(3, 500 + 300 * seed, 300 + seed);
      const auto a = estimate(s, { 3, 5 });
      worst_a0 = std::max(worst_a0, std::abs(a.at({ 0, 0, 0 }) - 1.0));
      const double integral =
        oracle::integrate_cube(3, 12, [&](const std::vector<double>& x) { return evaluate(a, x); });
      worst_integral = std::max(worst_integral, std::abs(integral - 1.0));
    }
    return Outcome{ worst_a0 <= 1e-12 && worst_integral <= 1e-8,
                    fmt("max |a_0 - 1| = %.3g (tol 1e-12), max |int rho - 1| = %.3g (tol 1e-8)",
                        worst_a0, worst_integral) };
  });

  check(4, "synthetic recovery from 1e5 rejection samples", 30.0, [] {
    const std::size_t n = 100000;
    const Matrix s = oracle::rejection_sample(2, n, 2.5, oracle::product_f1_density, 20240601);
    const auto a = estimate(s, { 2, 4 });
    const double a11 = a.at({ 1, 1 });
    const double bound = 5.0 / std::sqrt(static_cast<double>(n));
    double worst_other = 0.0;
    double worst_exact = 0.0;
    MultiIndex worst_index{ 0, 0 };
    for (const auto& j : enumerate_indices({ 2, 4 })) {
      // the target is negative in two corners, so the sampled law is its clipped version
      worst_exact = std::max(
        worst_exact, std::abs(a.at(j) - oracle::clipped_product_coefficient(j[0], j[1])));
      if (!j.is_zero() && j != MultiIndex{ 1, 1 } && std::abs(a.at(j)) > worst_other) {
        worst_other = std::abs(a.at(j));
        worst_index = j;
      }
    }
    return Outcome{ a11 >= 0.48 && a11 <= 0.52 && worst_other <= bound,
                    fmt("a_11 = %.5f (want [0.48, 0.52]), max other |a_j| = %.5f (bound %.5f)",
                        a11, worst_other, bound) +
                      " at j = " + index_string(worst_index, 4) +
                      fmt("; max gap to the sampled clipped law %.5f", worst_exact) };
  });

  check(5, "noise floor baseline at n = 6469", 1.0, [] {
    const double s = baseline_sigma(6469);
    return Outcome{ std::abs(s - 0.0124) <= 0.0001, fmt("1/sqrt(n) = %.6f (want 0.0124 +- 0.0001)", s) };
  });

  check(6, "marginalization commutes with estimation", 10.0, [] {
    const Matrix s = oracle::uniform_sample(3, 10000, 606);
    const auto full = estimate(s, { 3, 5 });
    double worst = 0.0;
    const std::vector<std::vector<int>> keeps{ { 0 }, { 1 }, { 2 }, { 0, 1 }, { 0, 2 }, { 1, 2 } };
    for (const auto& keep : keeps) {
      Matrix projected(s.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c)
        projected.col(static_cast<Eigen::Index>(c)) = s.col(keep[c]);
      const auto direct = estimate(projected, { static_cast<int>(keep.size()), 5 });
      const auto m = marginalize(full, keep);
      for (std::size_t e = 0; e < direct.entry_count(); ++e)
        worst = std::max(worst, std::abs(m.values()[e] - direct.values()[e]));
    }
    // quadrature over the dropped middle axis on an 11 x 11 grid
    const int keep02[] = { 0, 2 };
    const auto m02 = marginalize(full, keep02);
    const auto rule = oracle::gauss_legendre_01(32);
    double worst_quad = 0.0;
    for (int i = 0; i <= 10; ++i)
      for (int k = 0; k <= 10; ++k) {
        double q = 0.0;
        for (std::size_t p = 0; p < rule.nodes.size(); ++p)
          q += rule.weights[p] * evaluate(full, std::vector{ i / 10.0, rule.nodes[p], k / 10.0 });
        worst_quad =
          std::max(worst_quad, std::abs(q - evaluate(m02, std::vector{ i / 10.0, k / 10.0 })));
      }
    return Outcome{ worst <= 1e-12 && worst_quad <= 1e-8,
                    fmt("max coefficient gap %.3g (tol 1e-12), quadrature gap %.3g (tol 1e-8)",
                        worst, worst_quad) };
  });

  check(7, "overfitting signature, d = 6, m = 9, n = 6467", 300.0, [] {
    int cases = 0;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const RawSeries raw = oracle::dependent_pair_series(6470, 7000 + seed);
      const ModelConfig config{ { "b1", "b2" }, 2, 9 };
      const Model model = fit(config, raw);
      const Matrix vectors = model_vectors(model, raw);
      const auto own = evaluate(model, vectors);
      const auto held = evaluate_split(config, raw, 0.25, seed, default_thresholds());
      const bool ok = vectors.rows() == 6467 && own.negative_fraction <= 0.05 &&
                      held.negative_fraction >= 3.0 * own.negative_fraction;
      cases += ok ? 1 : 0;
      detail += fmt(" [%.2f%% vs %.2f%%]", 100 * own.negative_fraction, 100 * held.negative_fraction);
    }
    return Outcome{ cases >= 4, std::to_string(cases) + "/5 seeds with training <= 5% and "
                                "held-out >= 3x; non-positive share train vs held-out:" + detail };
  });

  const fs::path data = work / "series.csv";
  write_file(data, write_csv(oracle::dependent_pair_series(6470, 8080)));

  check(8, "matrix emits 27 reports with monotone threshold fractions", 600.0, [&] {
    if (run_cli({ "matrix", "--input", data.string(), "--columns", "b1,b2", "--orders", "0,1,2",
                  "--degrees", "1..9", "--test-fraction", "0.25", "--seed", "11", "--output",
                  (work / "matrix_a").string() }) != 0)
      return Outcome{ false, "matrix command failed" };
    int reports = 0;
    int monotone = 0;
    for (const auto& e : fs::directory_iterator(work / "matrix_a")) {
      const auto name = e.path().filename().string();
      if (!name.starts_with("report_") || name.ends_with(".curve.csv"))
        continue;
      ++reports;
      const auto sheet = read_thresholds(load_table(e.path()));
      bool ok = true;
      for (std::size_t i = 1; i < sheet.fractions.size(); ++i)
        ok = ok && sheet.fractions[i] <= sheet.fractions[i - 1];
      monotone += ok ? 1 : 0;
    }
    return Outcome{ reports == 27 && monotone == 27,
                    std::to_string(reports) + " reports, " + std::to_string(monotone) +
                      " monotone (n = 6470 rows)" };
  });

  check(9, "region statistics", 10.0, [] {
    const auto u = CoefficientTensor::uniform({ 2, 4 });
    const auto flat = region_stats(u, 2.0, { 200 });
    const CoefficientTensor q({ 1, 2 }, std::vector<double>{ 1.0, 0.0, 0.5 }, 0);
    const double r1 = (3.0 - std::sqrt(3.0)) / 6.0;
    const double volume = 2.0 * r1;
    const double mass = 2.0 * r1 + std::sqrt(5.0) * (2 * r1 * r1 * r1 - 3 * r1 * r1 + r1);
    const auto stats = region_stats(q, 1.0, { 10000 });
    const double dv = std::abs(stats.volume_fraction - volume);
    const double dm = std::abs(stats.mass_fraction - mass);
    return Outcome{ flat.volume_fraction == 0.0 && flat.mass_fraction == 0.0 && dv <= 1e-3 &&
                      dm <= 1e-3,
                    fmt("uniform above 2: volume %g mass %g; ", flat.volume_fraction,
                        flat.mass_fraction) +
                      fmt("1 + 0.5 f_2 above 1: volume gap %.2g, mass gap %.2g (tol 1e-3)", dv, dm) };
  });

  check(10, "eval and matrix are byte-identical across runs", 600.0, [&] {
    bool same = true;
    for (const char* tag : { "eval_a", "eval_b" }) {
      fs::create_directories(work / tag);
      if (run_cli({ "eval", "--input", data.string(), "--columns", "b1,b2", "--order", "1",
                    "--degree", "6", "--seed", "5", "--output", (work / tag / "report.csv").string() }) != 0)
        return Outcome{ false, "eval command failed" };
    }
    same = same && directory_bytes(work / "eval_a") == directory_bytes(work / "eval_b");
    if (!fs::exists(work / "matrix_a"))
      return Outcome{ false, "matrix output from criterion 8 missing" };
    if (run_cli({ "matrix", "--input", data.string(), "--columns", "b1,b2", "--orders", "0,1,2",
                  "--degrees", "1..9", "--test-fraction", "0.25", "--seed", "11", "--output",
                  (work / "matrix_b").string() }) != 0)
      return Outcome{ false, "matrix command failed" };
    const auto a = directory_bytes(work / "matrix_a");
    same = same && a == directory_bytes(work / "matrix_b");
    return Outcome{ same, same ? "eval (2 files) and matrix (" + std::to_string(a.size()) +
                                   " files) outputs identical"
                               : "outputs differ" };
  });

  fs::remove_all(work);
  std::printf("ACCEPTANCE SUMMARY: %d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
