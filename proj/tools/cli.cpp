#include "cli.hpp"

#include "hcr/csv_input.hpp"
#include "hcr/error.hpp"
#include "hcr/model_io.hpp"
#include "hcr/report.hpp"
#include "hcr/yield_curve.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace hcr::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 0;

struct InputFlags
{
  std::string path;
  std::vector<std::string> columns;
  std::string date_column = "date";
  bool from_yields = false;
  double lambda = kDieboldLiLambda;
};

struct ModelFlags
{
  int degree = 9;
  int order = 0;
  std::string normalizer = "laplace";
  std::optional<double> prune_sigmas;
};

void
add_input(CLI::App* cmd, InputFlags& in, bool columns = true)
{
  cmd->add_option("--input", in.path, "CSV file with a header row")->required();
  if (columns)
    cmd->add_option("--columns", in.columns, "Variables to use (default: all)")->delimiter(',');
  cmd->add_option("--date-column", in.date_column, "Column of time labels, used when present")
    ->capture_default_str();
  auto* fy =
    cmd->add_flag("--from-yields", in.from_yields, "Input holds yield curves; fit Diebold-Li first");
  cmd->add_option("--lambda", in.lambda, "Diebold-Li decay per month")
    ->capture_default_str()
    ->needs(fy);
}

std::vector<CLI::Option*>
add_model_flags(CLI::App* cmd, ModelFlags& m)
{
  std::vector<CLI::Option*> opts;
  opts.push_back(cmd->add_option("--degree", m.degree, "Polynomial degree per coordinate")
                   ->capture_default_str()
                   ->check(CLI::NonNegativeNumber));
  opts.push_back(cmd->add_option("--order", m.order, "Number of lagged time steps in the context")
                   ->capture_default_str()
                   ->check(CLI::NonNegativeNumber));
  opts.push_back(cmd->add_option("--normalizer", m.normalizer, "Marginal family")
                   ->capture_default_str()
                   ->check(CLI::IsMember({ "laplace", "gaussian" })));
  opts.push_back(cmd->add_option("--prune-sigmas", m.prune_sigmas,
                                 "Drop coefficients below this many standard errors")
                   ->check(CLI::NonNegativeNumber));
  return opts;
}

std::optional<std::string>
header_has(const std::string& text, const std::string& column)
{
  const auto end = text.find('\n');
  std::string_view header(text.data(), end == std::string::npos ? text.size() : end);
  std::size_t start = 0;
  while (start <= header.size()) {
    auto comma = header.find(',', start);
    if (comma == std::string_view::npos)
      comma = header.size();
    auto field = header.substr(start, comma - start);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front())))
      field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
      field.remove_suffix(1);
    if (field == column)
      return column;
    start = comma + 1;
  }
  return std::nullopt;
}

RawSeries
load_input(const InputFlags& in)
{
  const std::string text = read_file(in.path);
  CsvSelection selection;
  selection.date_column = header_has(text, in.date_column);
  if (!in.from_yields) {
    selection.columns = in.columns;
    return parse_csv(text, selection);
  }
  RawSeries betas = diebold_li_fit(yield_table_from(parse_csv(text, selection)), in.lambda);
  return in.columns.empty() ? betas : betas.select(in.columns);
}

ModelConfig
config_from(const ModelFlags& m, const RawSeries& raw)
{
  ModelConfig c;
  c.variables = raw.names;
  c.order = m.order;
  c.degree = m.degree;
  c.normalizer = parse_distribution(m.normalizer);
  c.prune_sigmas = m.prune_sigmas;
  return c;
}

std::string
join(const std::vector<std::string>& items, char sep)
{
  std::string out;
  for (const auto& s : items)
    out += (out.empty() ? "" : std::string(1, sep)) + s;
  return out;
}

Metadata
config_metadata(const ModelConfig& c)
{
  return { { "variables", join(c.variables, '+') },
           { "order", std::to_string(c.order) },
           { "degree", std::to_string(c.degree) },
           { "normalizer", to_string(c.normalizer) },
           { "prune_sigmas", c.prune_sigmas ? format_double(*c.prune_sigmas) : "none" } };
}

void
ensure_parent(const fs::path& path)
{
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
}

fs::path
sibling(const fs::path& path, const std::string& suffix)
{
  return path.parent_path() / (path.stem().string() + suffix);
}

/// Threshold table at path plus the sorted curve next to it.
void
write_report(const fs::path& path, const EvaluationReport& report, const Metadata& extra)
{
  ThresholdSheet th = emit_threshold_table(report);
  CurveSheet curve = emit_sorted_curve(report);
  th.metadata.insert(th.metadata.end(), extra.begin(), extra.end());
  curve.metadata.insert(curve.metadata.end(), extra.begin(), extra.end());
  ensure_parent(path);
  save_table(path, to_table(th));
  save_table(sibling(path, ".curve.csv"), to_table(curve));
}

std::vector<int>
integer_list(const std::string& text, const char* what)
{
  std::vector<int> out;
  for (double v : parse_number_list(text)) {
    if (v != std::floor(v) || v < 0)
      throw CLI::ValidationError(std::string(what) + " must be non-negative integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void
announce_seed(std::ostream& out, bool given, std::uint64_t seed)
{
  if (!given)
    out << "seed not given; using default seed " << seed << "\n";
}

} // namespace

std::vector<double>
parse_number_list(const std::string& text)
{
  std::vector<double> out;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const double lo = parse_double(text.substr(0, range));
    const double hi = parse_double(text.substr(range + 2));
    if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo)
      throw CLI::ValidationError("range '" + text + "' needs integer bounds low..high");
    for (double v = lo; v <= hi; v += 1.0)
      out.push_back(v);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos)
      comma = text.size();
    out.push_back(parse_double(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

int
run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Joint densities of time-series residuals as orthonormal polynomial expansions",
                "hcr" };
  app.require_subcommand(1);
  app.set_version_flag("--version", "hcr 0.1.0");

  std::function<void()> action;

  // fit
  InputFlags fit_in;
  ModelFlags fit_m;
  std::string fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a density model and save it");
  add_input(fit_cmd, fit_in);
  add_model_flags(fit_cmd, fit_m);
  fit_cmd->add_option("--output", fit_out, "Model file to write")->required();
  fit_cmd->callback([&] {
    action = [&] {
      const RawSeries raw = load_input(fit_in);
      const Model model = fit(config_from(fit_m, raw), raw);
      ensure_parent(fit_out);
      save_model(fit_out, model);
      out << "wrote " << fit_out << " (" << model.coeffs.entry_count() << " coefficients, d="
          << model.coeffs.dim() << ", n=" << model.coeffs.sample_size() << ")\n";
    };
  });

  // eval
  InputFlags ev_in;
  ModelFlags ev_m;
  std::string ev_model;
  double ev_fraction = 0.25;
  std::uint64_t ev_seed = kDefaultSeed;
  std::string ev_thresholds = "0..10";
  std::string ev_out;
  auto* ev_cmd = app.add_subcommand("eval", "Score a model on held-out data");
  add_input(ev_cmd, ev_in);
  auto* ev_model_opt = ev_cmd->add_option("--model", ev_model, "Saved model to evaluate");
  for (auto* opt : add_model_flags(ev_cmd, ev_m))
    opt->excludes(ev_model_opt);
  auto* ev_fraction_opt =
    ev_cmd->add_option("--test-fraction", ev_fraction, "Held-out share of time steps")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  auto* ev_seed_opt = ev_cmd->add_option("--seed", ev_seed, "Split seed");
  ev_cmd->add_option("--thresholds", ev_thresholds, "Density thresholds, e.g. 0..10 or 0,2,5")
    ->capture_default_str();
  ev_cmd->add_option("--output", ev_out, "Report file (a .curve.csv is written beside it)")
    ->required();
  ev_cmd->callback([&] {
    action = [&] {
      const auto thresholds = parse_number_list(ev_thresholds);
      const RawSeries raw = load_input(ev_in);
      EvaluationReport report;
      Metadata extra;
      if (!ev_model.empty()) {
        const Model model = load_model(ev_model);
        const Matrix vectors = model_vectors(model, raw);
        if (ev_fraction_opt->count() > 0) {
          announce_seed(out, ev_seed_opt->count() > 0, ev_seed);
          report = evaluate(model, split(vectors, ev_fraction, ev_seed).second, thresholds);
          extra.emplace_back("test_fraction", format_double(ev_fraction));
        } else {
          report = evaluate(model, vectors, thresholds);
          extra.emplace_back("test_fraction", "none");
        }
        report.seed = ev_seed;
        extra.insert(extra.begin(), { "model", fs::path(ev_model).filename().string() });
        const auto cm = config_metadata(model.config);
        extra.insert(extra.end(), cm.begin(), cm.end());
      } else {
        announce_seed(out, ev_seed_opt->count() > 0, ev_seed);
        const ModelConfig config = config_from(ev_m, raw);
        report = evaluate_split(config, raw, ev_fraction, ev_seed, thresholds);
        extra = config_metadata(config);
        extra.emplace_back("test_fraction", format_double(ev_fraction));
      }
      write_report(ev_out, report, extra);
      out << "wrote " << ev_out << " (" << report.n_test << " points, "
          << percent_string(report.negative_fraction) << " non-positive)\n";
    };
  });

  // matrix
  InputFlags mx_in;
  ModelFlags mx_m;
  std::string mx_orders = "0,1,2";
  std::string mx_degrees = "1..9";
  double mx_fraction = 0.25;
  std::uint64_t mx_seed = kDefaultSeed;
  std::string mx_thresholds = "0..10";
  std::string mx_out;
  auto* mx_cmd = app.add_subcommand("matrix", "Evaluate every order x degree on one split");
  add_input(mx_cmd, mx_in);
  mx_cmd->add_option("--normalizer", mx_m.normalizer, "Marginal family")
    ->capture_default_str()
    ->check(CLI::IsMember({ "laplace", "gaussian" }));
  mx_cmd->add_option("--prune-sigmas", mx_m.prune_sigmas, "Prune every model at this level")
    ->check(CLI::NonNegativeNumber);
  mx_cmd->add_option("--orders", mx_orders, "Context orders")->capture_default_str();
  mx_cmd->add_option("--degrees", mx_degrees, "Degrees")->capture_default_str();
  mx_cmd->add_option("--test-fraction", mx_fraction, "Held-out share of time steps")
    ->capture_default_str()
    ->check(CLI::Range(0.0, 1.0));
  auto* mx_seed_opt = mx_cmd->add_option("--seed", mx_seed, "Split seed");
  mx_cmd->add_option("--thresholds", mx_thresholds, "Density thresholds")->capture_default_str();
  mx_cmd->add_option("--output", mx_out, "Directory for reports")->required();
  mx_cmd->callback([&] {
    action = [&] {
      const RawSeries raw = load_input(mx_in);
      MatrixRequest request;
      request.variable_sets = { raw.names };
      request.orders = integer_list(mx_orders, "orders");
      request.degrees = integer_list(mx_degrees, "degrees");
      request.normalizer = parse_distribution(mx_m.normalizer);
      request.prune_sigmas = mx_m.prune_sigmas;
      request.test_fraction = mx_fraction;
      request.seed = mx_seed;
      request.thresholds = parse_number_list(mx_thresholds);
      announce_seed(out, mx_seed_opt->count() > 0, mx_seed);
      const auto results = evaluate_matrix(raw, request);
      fs::create_directories(mx_out);
      for (const auto& r : results) {
        Metadata extra = config_metadata(r.config);
        extra.emplace_back("test_fraction", format_double(mx_fraction));
        const std::string name = "report_k" + std::to_string(r.config.order) + "_m" +
                                 std::to_string(r.config.degree) + ".csv";
        write_report(fs::path(mx_out) / name, r.report, extra);
      }
      Table summary = matrix_summary(results);
      summary.metadata = { { "seed", std::to_string(mx_seed) },
                           { "test_fraction", format_double(mx_fraction) },
                           { "normalizer", mx_m.normalizer } };
      save_table(fs::path(mx_out) / "summary.csv", summary);
      out << "wrote " << results.size() << " reports to " << mx_out << "\n";
    };
  });

  // grid
  std::string gr_model;
  std::vector<int> gr_pair;
  int gr_resolution = 100;
  std::string gr_overlay_input;
  std::string gr_date = "date";
  std::string gr_out;
  auto* gr_cmd = app.add_subcommand("grid", "Pair marginal of a model on a regular grid");
  gr_cmd->add_option("--model", gr_model, "Saved model")->required();
  gr_cmd->add_option("--pair", gr_pair, "Two coordinate positions, e.g. 0,1")
    ->required()
    ->delimiter(',')
    ->expected(2);
  gr_cmd->add_option("--resolution", gr_resolution, "Cells per axis")
    ->capture_default_str()
    ->check(CLI::Range(2, 100000));
  gr_cmd->add_option("--input", gr_overlay_input,
                     "Data whose context vectors are written as an overlay");
  gr_cmd->add_option("--date-column", gr_date, "Time label column of --input")
    ->capture_default_str();
  gr_cmd->add_option("--output", gr_out, "Grid table")->required();
  gr_cmd->callback([&] {
    action = [&] {
      const Model model = load_model(gr_model);
      const auto names = model.config.coordinate_names();
      for (int c : gr_pair)
        if (c < 0 || c >= model.coeffs.dim())
          throw InvalidInput("pair coordinate " + std::to_string(c) + " is outside 0.." +
                             std::to_string(model.coeffs.dim() - 1));
      std::optional<Matrix> sample;
      if (!gr_overlay_input.empty()) {
        InputFlags in;
        in.path = gr_overlay_input;
        in.columns = model.config.variables;
        in.date_column = gr_date;
        sample = model_vectors(model, load_input(in));
      }
      const std::array<int, 2> pair{ gr_pair[0], gr_pair[1] };
      GridSheet sheet =
        emit_pair_grid(model.coeffs, pair,
                       gr_resolution,
                       { names[static_cast<std::size_t>(pair[0])],
                         names[static_cast<std::size_t>(pair[1])] },
                       sample ? &*sample : nullptr);
      sheet.metadata = config_metadata(model.config);
      ensure_parent(gr_out);
      save_table(gr_out, to_table(sheet));
      if (sample)
        save_table(sibling(gr_out, ".overlay.csv"), overlay_table(sheet));
      out << "wrote " << gr_out << " (" << gr_resolution << "x" << gr_resolution << ")\n";
    };
  });

  // topk
  std::string tk_model;
  InputFlags tk_in;
  std::size_t tk_k = 100;
  std::string tk_out;
  auto* tk_cmd = app.add_subcommand("topk", "Largest coefficients with their noise level");
  tk_cmd->add_option("--model", tk_model, "Saved model")->required();
  add_input(tk_cmd, tk_in, false);
  tk_cmd->add_option("--k", tk_k, "Number of coefficients besides the normalization")
    ->capture_default_str()
    ->check(CLI::PositiveNumber);
  tk_cmd->add_option("--output", tk_out, "Coefficient table")->required();
  tk_cmd->callback([&] {
    action = [&] {
      const Model model = load_model(tk_model);
      tk_in.columns = model.config.variables;
      const Matrix sample = model_vectors(model, load_input(tk_in));
      const CoefficientReport report = top_k(model.coeffs, sample, tk_k);
      CoefficientSheet sheet = emit_coefficients(report, model.coeffs.dim());
      // the coefficient table carries dim and degree itself
      for (const auto& entry : config_metadata(model.config))
        if (entry.first != "degree")
          sheet.metadata.push_back(entry);
      sheet.metadata.emplace_back("n", std::to_string(sample.rows()));
      sheet.metadata.emplace_back("baseline_sigma", format_double(baseline_sigma(
                                                      static_cast<std::size_t>(sample.rows()))));
      ensure_parent(tk_out);
      save_table(tk_out, to_table(sheet));
      out << "wrote " << tk_out << " (" << sheet.rows.size() << " rows)\n";
    };
  });

  // normalize
  InputFlags nm_in;
  std::string nm_normalizer = "laplace";
  std::string nm_out;
  auto* nm_cmd = app.add_subcommand("normalize", "Residuals, fitted marginals and uniform series");
  add_input(nm_cmd, nm_in);
  nm_cmd->add_option("--normalizer", nm_normalizer, "Family used for the uniform series")
    ->capture_default_str()
    ->check(CLI::IsMember({ "laplace", "gaussian" }));
  nm_cmd->add_option("--output", nm_out, "Output directory")->required();
  nm_cmd->callback([&] {
    action = [&] {
      const RawSeries raw = load_input(nm_in);
      const ResidualSeries res = difference_series(raw);
      const Distribution kind = parse_distribution(nm_normalizer);
      const auto params = fit_normalizers(kind, res);
      const UniformSeries u = normalize_series(res, params);
      fs::create_directories(nm_out);

      auto series_table = [&](const Matrix& values) {
        Table t;
        const bool with_times = !raw.times.empty();
        if (with_times)
          t.header.push_back(nm_in.date_column);
        t.header.insert(t.header.end(), res.names.begin(), res.names.end());
        for (Eigen::Index r = 0; r < values.rows(); ++r) {
          std::vector<std::string> row;
          if (with_times)
            row.push_back(raw.times[static_cast<std::size_t>(r) + 1]);
          for (Eigen::Index c = 0; c < values.cols(); ++c)
            row.push_back(format_double(values(r, c)));
          t.rows.push_back(std::move(row));
        }
        return t;
      };
      save_table(fs::path(nm_out) / "residuals.csv", series_table(res.values));
      Table ut = series_table(u.values);
      ut.metadata = { { "normalizer", nm_normalizer } };
      save_table(fs::path(nm_out) / "uniform.csv", ut);

      Table pt;
      pt.header = { "variable", "distribution", "location", "scale" };
      for (std::size_t v = 0; v < params.size(); ++v)
        pt.rows.push_back({ res.names[v], to_string(params[v].kind),
                            format_double(params[v].location), format_double(params[v].scale) });
      save_table(fs::path(nm_out) / "params.csv", pt);

      for (std::size_t v = 0; v < res.vars(); ++v) {
        const Eigen::VectorXd col = res.values.col(static_cast<Eigen::Index>(v));
        const std::span<const double> samples(col.data(), static_cast<std::size_t>(col.size()));
        const Normalizer lap = fit_laplace(samples);
        const Normalizer gau = fit_gaussian(samples);
        Table ct;
        ct.metadata = { { "variable", res.names[v] },
                        { "laplace_location", format_double(lap.location) },
                        { "laplace_scale", format_double(lap.scale) },
                        { "gaussian_location", format_double(gau.location) },
                        { "gaussian_scale", format_double(gau.scale) } };
        ct.header = { "value", "empirical", "laplace", "gaussian" };
        for (const auto& [y, p] : empirical_cdf(samples))
          ct.rows.push_back({ format_double(y), format_double(p), format_double(lap.cdf(y)),
                              format_double(gau.cdf(y)) });
        save_table(fs::path(nm_out) / ("cdf_" + res.names[v] + ".csv"), ct);
      }
      out << "wrote " << res.rows() << " residuals of " << res.vars() << " variables to "
          << nm_out << "\n";
    };
  });

  // region
  std::string rg_model;
  double rg_threshold = 0.0;
  int rg_resolution = 100;
  std::uint64_t rg_samples = 1'000'000;
  std::uint64_t rg_seed = kDefaultSeed;
  std::string rg_out;
  auto* rg_cmd = app.add_subcommand("region", "Volume and mass where the density exceeds T");
  rg_cmd->add_option("--model", rg_model, "Saved model")->required();
  rg_cmd->add_option("--threshold", rg_threshold, "Density level T")->required();
  auto* rg_res_opt = rg_cmd->add_option("--resolution", rg_resolution, "Grid cells per axis (d <= 3)")
                       ->capture_default_str()
                       ->check(CLI::Range(2, 100000000));
  auto* rg_samples_opt =
    rg_cmd->add_option("--mc-samples", rg_samples, "Monte Carlo points (d > 3)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->excludes(rg_res_opt);
  auto* rg_seed_opt =
    rg_cmd->add_option("--seed", rg_seed, "Monte Carlo seed")->excludes(rg_res_opt);
  rg_cmd->add_option("--output", rg_out, "Region table")->required();
  rg_cmd->callback([&] {
    action = [&] {
      const Model model = load_model(rg_model);
      const bool grid = model.coeffs.dim() <= 3;
      if (grid && (rg_samples_opt->count() || rg_seed_opt->count()))
        throw CLI::ValidationError("--mc-samples/--seed apply to models with more than 3 "
                                   "coordinates; use --resolution");
      if (!grid && rg_res_opt->count())
        throw CLI::ValidationError("--resolution applies to models with at most 3 coordinates; "
                                   "use --mc-samples and --seed");
      if (!grid)
        announce_seed(out, rg_seed_opt->count() > 0, rg_seed);
      RegionSheet sheet;
      sheet.threshold = rg_threshold;
      sheet.stats = region_stats(model.coeffs, rg_threshold, { rg_resolution, rg_samples, rg_seed });
      sheet.metadata = config_metadata(model.config);
      if (!grid)
        sheet.metadata.emplace_back("seed", std::to_string(rg_seed));
      ensure_parent(rg_out);
      save_table(rg_out, to_table(sheet));
      out << "wrote " << rg_out << " (volume " << percent_string(sheet.stats.volume_fraction)
          << ", mass " << percent_string(sheet.stats.mass_fraction) << ")\n";
    };
  });

  std::vector<const char*> argv{ "hcr" };
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (action)
      action();
    return kOk;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericError;
  }
}

int
run(int argc, const char* const* argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace hcr::cli
