#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "alsm/csv.hpp"
#include "alsm/errors.hpp"
#include "alsm/json_io.hpp"
#include "alsm/modelsel.hpp"
#include "alsm/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitFit = 3;
constexpr std::uint64_t kDefaultSeed = 20220531;

struct InputOpts {
  std::string path;
  std::string column;
  std::string kind = "prices";
  std::string format = "csv";  // csv | yahoo-csv
};

void add_input_options(CLI::App* cmd, InputOpts& in, bool with_format = true) {
  cmd->add_option("--input", in.path, "CSV file")->required();
  cmd->add_option("--column", in.column, "column to read");
  cmd->add_option("--kind", in.kind, "prices|returns")
      ->check(CLI::IsMember({"prices", "returns"}));
  if (with_format)
    cmd->add_option("--format", in.format, "csv|yahoo-csv")
        ->check(CLI::IsMember({"csv", "yahoo-csv"}));
}

alsm::IngestResult read_series(const InputOpts& in) {
  std::string column = in.column;
  std::optional<std::string> date_col;
  if (in.format == "yahoo-csv") {
    if (column.empty()) column = "Adj Close";
    date_col = "Date";
  }
  if (column.empty())
    throw alsm::InputError("--column is required (or use --format yahoo-csv)");
  const alsm::SeriesKind kind = in.kind == "returns"
                                    ? alsm::SeriesKind::Returns
                                    : alsm::SeriesKind::Prices;
  return alsm::ingest_csv(in.path, column, kind, date_col);
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw alsm::InputError("cannot write: " + out_path);
  f << text;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_describe(const InputOpts& in, const std::string& out_path) {
  const alsm::IngestResult r = read_series(in);
  const alsm::DescriptiveStats d = alsm::describe(r.series);
  std::ostringstream os;
  os << "source: " << r.series.source << '\n'
     << "column: " << r.series.label << '\n'
     << "dropped_rows: " << r.dropped_rows << '\n'
     << "n: " << d.n << '\n'
     << "mean: " << fmt(d.mean) << '\n'
     << "median: " << fmt(d.median) << '\n'
     << "st_dev: " << fmt(d.st_dev) << '\n'
     << "skewness: " << fmt(d.skewness) << '\n'
     << "kurtosis: " << fmt(d.kurtosis) << '\n'
     << "excess_kurtosis: " << fmt(d.excess_kurtosis) << '\n'
     << "minimum: " << fmt(d.minimum) << '\n'
     << "maximum: " << fmt(d.maximum) << '\n'
     << "jarque_bera_stat: " << fmt(d.jarque_bera_stat) << '\n'
     << "jarque_bera_pvalue: " << fmt(d.jarque_bera_pvalue) << '\n';
  write_output(os.str(), out_path);
  return kExitOk;
}

alsm::FitConfig make_config(int max_iter, double tol, const std::string& init) {
  alsm::FitConfig cfg;
  cfg.max_iter = max_iter;
  cfg.loglik_rel_tol = tol;
  cfg.init = init == "moments" ? alsm::FitConfig::Init::Moments
                               : alsm::FitConfig::Init::Defaults;
  return cfg;
}

int cmd_fit(const InputOpts& in, const std::string& model,
            const std::string& init, int max_iter, double tol,
            const std::string& out_path) {
  const alsm::IngestResult r = read_series(in);
  const alsm::FitConfig cfg = make_config(max_iter, tol, init);
  alsm::FitResult fr;
  if (model == "al") {
    fr = alsm::fit_al(r.series.values, cfg);
  } else {
    const auto fam = alsm::family_from_tag(model);
    if (!fam) throw alsm::InputError("unknown model: " + model);
    fr = alsm::fit(*fam, r.series.values, cfg);
  }
  write_output(alsm::fit_result_to_json(fr).dump(2) + "\n", out_path);
  return fr.converged ? kExitOk : kExitFit;
}

int cmd_compare(const InputOpts& in, std::string models_csv,
                const std::string& format, int max_iter, double tol,
                const std::string& init, const std::string& out_path) {
  const alsm::IngestResult r = read_series(in);
  std::vector<std::string> models;
  if (models_csv.empty()) {
    models = alsm::default_model_set();
  } else {
    std::stringstream ss(models_csv);
    std::string tag;
    while (std::getline(ss, tag, ',')) models.push_back(tag);
  }
  const alsm::FitConfig cfg = make_config(max_iter, tol, init);
  const auto rows = alsm::compare(r.series.values, models, cfg);
  if (format == "json") {
    write_output(alsm::comparison_to_json(rows).dump(2) + "\n", out_path);
  } else {
    write_output(alsm::comparison_csv(rows), out_path);
  }
  bool trouble = false;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "warning: " << row.model << ": " << row.error << '\n';
      trouble = true;
    } else if (row.fit && row.fit->mixing && !row.fit->converged) {
      std::cerr << "warning: " << row.model << ": not converged\n";
      trouble = true;
    }
  }
  return trouble ? kExitFit : kExitOk;
}

int cmd_simulate(const std::string& model, double mu, double beta,
                 double kappa, const std::string& theta_csv, std::size_t n,
                 std::uint64_t seed, const std::string& out_path) {
  std::vector<double> theta;
  if (!theta_csv.empty()) {
    std::stringstream ss(theta_csv);
    std::string part;
    while (std::getline(ss, part, ',')) theta.push_back(std::stod(part));
  }
  alsm::ALParams al{mu, beta, kappa};
  al.validate();
  std::vector<double> draws;
  if (model == "al") {
    if (!theta.empty())
      throw alsm::InputError("model al takes no theta");
    draws = alsm::al_sample(al, n, seed);
  } else {
    const auto fam = alsm::family_from_tag(model);
    if (!fam) throw alsm::InputError("unknown model: " + model);
    alsm::MixingLaw mixing =
        *fam == alsm::Family::TwoPoint
            ? (theta.size() == 2
                   ? alsm::MixingLaw::two_point(theta[0], theta[1])
                   : throw alsm::InputError("tp-al needs --theta t1,t2"))
            : (theta.size() == 1
                   ? alsm::MixingLaw::make(*fam, theta[0])
                   : throw alsm::InputError(model + " needs --theta t"));
    draws = alsm::alsm_sample({al, mixing}, n, seed);
  }
  std::ostringstream os;
  os << "# model=" << model << " seed=" << seed << '\n' << "value\n";
  for (double v : draws) os << fmt(v) << '\n';
  write_output(os.str(), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymmetric Laplace scale mixture fitting and comparison"};
  app.require_subcommand(1);

  InputOpts in;
  std::string out_path;
  std::string model = "se-al";
  std::string init = "default";
  std::string models_csv;
  std::string table_format = "csv";
  int max_iter = 1000;
  double tol = 1e-8;
  double mu = 0.0, beta = 1.0, kappa = 1.0;
  std::string theta_csv;
  std::size_t n_draws = 1000;
  std::uint64_t seed = kDefaultSeed;

  auto* describe = app.add_subcommand("describe", "summary statistics");
  add_input_options(describe, in);
  describe->add_option("--out", out_path, "output file (default stdout)");

  auto* fit = app.add_subcommand("fit", "fit one model by ML");
  add_input_options(fit, in);
  fit->add_option("--model", model, "al or a mixing-family tag")->required();
  fit->add_option("--init", init, "moments|default")
      ->check(CLI::IsMember({"moments", "default"}));
  fit->add_option("--max-iter", max_iter, "iteration cap");
  fit->add_option("--tol", tol, "relative log-likelihood tolerance");
  fit->add_option("--out", out_path, "output file (default stdout)");

  auto* compare = app.add_subcommand("compare", "fit and rank several models");
  add_input_options(compare, in, /*with_format=*/false);
  compare->add_option("--models", models_csv,
                      "comma-separated tags (default: all)");
  compare->add_option("--format", table_format, "csv|json output table")
      ->check(CLI::IsMember({"csv", "json"}));
  compare->add_option("--input-format", in.format, "csv|yahoo-csv")
      ->check(CLI::IsMember({"csv", "yahoo-csv"}));
  compare->add_option("--init", init, "moments|default")
      ->check(CLI::IsMember({"moments", "default"}));
  compare->add_option("--max-iter", max_iter, "iteration cap");
  compare->add_option("--tol", tol, "relative log-likelihood tolerance");
  compare->add_option("--out", out_path, "output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "draw from a model");
  simulate->add_option("--model", model, "al or a mixing-family tag")
      ->required();
  simulate->add_option("--mu", mu, "location");
  simulate->add_option("--beta", beta, "scale")->required();
  simulate->add_option("--kappa", kappa, "asymmetry")->required();
  simulate->add_option("--theta", theta_csv, "tailedness (t or t1,t2)");
  simulate->add_option("-n,--n", n_draws, "number of draws")->required();
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(describe)) return cmd_describe(in, out_path);
    if (app.got_subcommand(fit))
      return cmd_fit(in, model, init, max_iter, tol, out_path);
    if (app.got_subcommand(compare))
      return cmd_compare(in, models_csv, table_format, max_iter, tol, init,
                         out_path);
    if (app.got_subcommand(simulate))
      return cmd_simulate(model, mu, beta, kappa, theta_csv, n_draws, seed,
                          out_path);
  } catch (const alsm::DegenerateSupportError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFit;
  } catch (const alsm::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
