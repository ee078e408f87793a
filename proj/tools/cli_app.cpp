#include "cli_app.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "glaa/csv.hpp"
#include "glaa/harness.hpp"
#include "glaa/rng.hpp"

namespace glaa::cli {

namespace {

using nlohmann::json;

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int fail(ExitCode code, const std::string& kind, const std::string& message) {
  std::cerr << "glaa: error: " << kind << ": " << message << "\n";
  return code;
}

json index_set_to_json(const IndexSet& set) {
  json arr = json::array();
  for (Index j : set) arr.push_back(j + 1);  // 1-based in external artifacts
  return arr;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

int write_document(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) return -1;
  out << doc.dump(2) << "\n";
  return out.good() ? 0 : -1;
}

struct LoadedData {
  Dataset raw;
  Index n = 0;
  Dims p{0, 0, 0};
};

// Reads the three blocks; throws ParseError / DimensionError.
LoadedData load_xyz(const std::string& x_path, const std::string& y_path,
                    const std::string& z_path) {
  LoadedData data;
  data.raw.x = read_csv_matrix(x_path);
  data.raw.y = read_csv_matrix(y_path);
  data.raw.z = read_csv_matrix(z_path);
  data.raw.validate();
  data.n = data.raw.n();
  data.p = data.raw.p();
  return data;
}

void check_ranks_fit_data(const std::array<Index, 3>& ranks, const Dims& p) {
  for (int k = 0; k < 3; ++k) {
    if (ranks[k] > p[k]) {
      throw ValueError("rank " + std::to_string(ranks[k]) + " for mode " +
                       std::to_string(k + 1) + " exceeds the data dimension " +
                       std::to_string(p[k]));
    }
  }
}

json fit_to_json(const GlaaFit& f) {
  json jf;
  jf["converged"] = f.converged;
  jf["iterations"] = f.iterations;
  jf["objective"] = f.objective;
  jf["stop_delta"] = f.diagnostics.stop_delta;
  jf["singular_values"] = {vector_to_json(f.singular_values[0]),
                           vector_to_json(f.singular_values[1]),
                           vector_to_json(f.singular_values[2])};
  jf["active"] = {index_set_to_json(f.active[0]),
                  index_set_to_json(f.active[1]),
                  index_set_to_json(f.active[2])};
  jf["loadings"] = {matrix_to_json(f.gamma[0]), matrix_to_json(f.gamma[1]),
                    matrix_to_json(f.gamma[2])};
  jf["init_active"] = {index_set_to_json(f.diagnostics.init_active[0]),
                       index_set_to_json(f.diagnostics.init_active[1]),
                       index_set_to_json(f.diagnostics.init_active[2])};
  jf["init_fallback"] = f.diagnostics.init_fallback;
  jf["iteration_fallbacks"] = f.diagnostics.iteration_fallbacks;
  return jf;
}

// ---------------------------------------------------------------- fit ----

struct FitOptions {
  std::string x_path, y_path, z_path, out_path;
  std::vector<Index> ranks;
  std::vector<double> eta, eta_tilde;
  double init_keep = 0.5;
  int max_iter = 100;
  double tol = 1e-6;
};

int cmd_fit(const FitOptions& opt) {
  try {
    const LoadedData data = load_xyz(opt.x_path, opt.y_path, opt.z_path);
    GlaaConfig config;
    config.ranks = {opt.ranks[0], opt.ranks[1], opt.ranks[2]};
    try {
      check_ranks_fit_data(config.ranks, data.p);
    } catch (const ValueError& e) {
      return fail(kConfig, "config", e.what());
    }
    config.max_iter = opt.max_iter;
    config.tol = opt.tol;

    const Dataset centered = center(data.raw);
    const Tensor3 delta = sample_delta(centered);
    if (!opt.eta.empty()) {
      config.eta = {opt.eta[0], opt.eta[1], opt.eta[2]};
    } else {
      config.eta = init_eta_from_quantile(delta, opt.init_keep);
    }
    if (!opt.eta_tilde.empty()) {
      config.eta_tilde = {opt.eta_tilde[0], opt.eta_tilde[1],
                          opt.eta_tilde[2]};
    }
    const GlaaFit f = fit(delta, config);

    json doc;
    doc["command"] = "fit";
    doc["timestamp"] = timestamp_utc();
    doc["inputs"] = {{"x", opt.x_path}, {"y", opt.y_path}, {"z", opt.z_path}};
    doc["data"] = {{"n", data.n}, {"p", {data.p[0], data.p[1], data.p[2]}}};
    doc["config"] = {{"ranks", config.ranks},
                     {"eta", config.eta},
                     {"eta_tilde", config.eta_tilde},
                     {"max_iter", config.max_iter},
                     {"tol", config.tol}};
    doc["fit"] = fit_to_json(f);
    // Per-observation scores of the estimated linear combinations, for
    // downstream conditioning plots.
    doc["scores"] = {{"x", matrix_to_json(centered.x * f.gamma[0])},
                     {"y", matrix_to_json(centered.y * f.gamma[1])}};
    if (write_document(opt.out_path, doc) != 0) {
      return fail(kIo, "io", "cannot write '" + opt.out_path + "'");
    }
    return kOk;
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const DimensionError& e) {
    return fail(kDimension, "dimension", e.what());
  } catch (const NumericError& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const ValueError& e) {
    return fail(kConfig, "config", e.what());
  }
}

// --------------------------------------------------------------- tune ----

struct TuneOptions {
  std::string x_path, y_path, z_path, out_path;
  std::vector<Index> ranks;
  int grid_size = 8;
  double split_frac = 0.5;
  std::uint64_t seed = 0;
  int folds = 1;
  double init_keep = 0.5;
  std::vector<double> search_keep;
  bool refit = false;
  bool no_screen_z = false;
};

int cmd_tune(const TuneOptions& opt) {
  try {
    const LoadedData data = load_xyz(opt.x_path, opt.y_path, opt.z_path);
    const std::array<Index, 3> ranks{opt.ranks[0], opt.ranks[1], opt.ranks[2]};
    try {
      check_ranks_fit_data(ranks, data.p);
    } catch (const ValueError& e) {
      return fail(kConfig, "config", e.what());
    }

    TuningGrid grid;
    grid.split_fraction = opt.split_frac;
    grid.seed = opt.seed;
    grid.grid_size = opt.grid_size;
    grid.folds = opt.folds;
    grid.init_keep_fraction = opt.init_keep;
    grid.init_keep_candidates = opt.search_keep;
    grid.screen_z = !opt.no_screen_z;
    const TuningResult tuned = tune(data.raw, ranks, grid);

    json doc;
    doc["command"] = "tune";
    doc["timestamp"] = timestamp_utc();
    doc["inputs"] = {{"x", opt.x_path}, {"y", opt.y_path}, {"z", opt.z_path}};
    doc["data"] = {{"n", data.n}, {"p", {data.p[0], data.p[1], data.p[2]}}};
    doc["grid"] = {{"split_fraction", grid.split_fraction},
                   {"seed", grid.seed},
                   {"grid_size", grid.grid_size},
                   {"folds", grid.folds},
                   {"init_keep_fraction", grid.init_keep_fraction}};
    json table = json::array();
    for (const TuningEntry& e : tuned.loss_table) {
      table.push_back({{"eta_tilde", e.eta_tilde},
                       {"init_keep", e.init_keep},
                       {"loss", e.loss},
                       {"iterations", e.iterations},
                       {"converged", e.converged}});
    }
    doc["tuning"] = {{"best_eta_tilde", tuned.best_eta_tilde},
                     {"best_loss", tuned.best_loss},
                     {"best_init_keep", tuned.best_init_keep},
                     {"chosen_init_eta", tuned.chosen_init_eta},
                     {"loss_table", table}};

    if (opt.refit) {
      const Dataset centered = center(data.raw);
      const Tensor3 delta = sample_delta(centered);
      GlaaConfig config;
      config.ranks = ranks;
      config.eta = init_eta_from_quantile(delta, tuned.best_init_keep);
      if (opt.no_screen_z) config.eta[2] = 0.0;
      config.eta_tilde = tuned.best_eta_tilde;
      doc["refit"] = fit_to_json(fit(delta, config));
      doc["refit"]["eta"] = config.eta;
    }
    if (write_document(opt.out_path, doc) != 0) {
      return fail(kIo, "io", "cannot write '" + opt.out_path + "'");
    }
    return kOk;
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const DimensionError& e) {
    return fail(kDimension, "dimension", e.what());
  } catch (const NumericError& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const ValueError& e) {
    return fail(kConfig, "config", e.what());
  }
}

// ---------------------------------------------------------------- gla ----

struct GlaOptions {
  std::string x_path, y_path, z_path, out_path;
  double ridge = 0.0;
};

int cmd_gla(const GlaOptions& opt) {
  try {
    const LoadedData data = load_xyz(opt.x_path, opt.y_path, opt.z_path);
    const Dataset centered = center(data.raw);
    const Tensor3 delta = sample_delta(centered);
    const Matrix sigma_z = (centered.z.transpose() * centered.z) /
                           static_cast<double>(data.n - 1);
    Tensor3 phi(1, 1, 1);
    try {
      phi = gla_tensor(delta, sigma_z, opt.ridge);
    } catch (const NumericError&) {
      return fail(kNumeric, "numeric",
                  "sample covariance of z is singular; pass --ridge EPS to "
                  "regularize the inverse");
    }

    json doc = tensor_to_json(phi);
    doc["command"] = "gla";
    doc["timestamp"] = timestamp_utc();
    doc["inputs"] = {{"x", opt.x_path}, {"y", opt.y_path}, {"z", opt.z_path}};
    doc["ridge"] = opt.ridge;
    if (write_document(opt.out_path, doc) != 0) {
      return fail(kIo, "io", "cannot write '" + opt.out_path + "'");
    }
    return kOk;
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const DimensionError& e) {
    return fail(kDimension, "dimension", e.what());
  } catch (const NumericError& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const ValueError& e) {
    return fail(kConfig, "config", e.what());
  }
}

// ----------------------------------------------------------- simulate ----

struct SimulateOptions {
  int scenario = 1;
  Index n = -1, p1 = -1, p2 = -1, p3 = -1;
  std::string f_kind = "sign";
  std::vector<double> rho;
  double xi = 1.0;
  int reps = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  HarnessOptions harness;
};

std::string csv_field(double v) { return format_double(v); }

void write_replications_csv(const std::string& path,
                            const std::vector<RepResult>& reps) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "rep,method,tpr1,fpr1,tpr2,fpr2,tpr3,fpr3,d1,d2,d3,d_avg,"
         "iterations,converged,objective,delta_sq,delta_hat_sq,"
         "eta1,eta2,eta3,eta_tilde1,eta_tilde2,eta_tilde3,tuning_loss\n";
  auto metrics_fields = [](const MetricsReport& m) {
    std::string s;
    for (int k = 0; k < 2; ++k) {
      s += csv_field(m.tpr[k]) + "," + csv_field(m.fpr[k]) + ",";
    }
    s += csv_field(m.tpr[2]) + "," + csv_field(m.fpr[2]) + ",";
    for (int k = 0; k < 3; ++k) s += csv_field(m.d_per_mode[k]) + ",";
    s += csv_field(m.d_avg);
    return s;
  };
  for (const RepResult& r : reps) {
    out << r.rep << ",glaa," << metrics_fields(r.glaa) << ","
        << r.iterations << "," << (r.converged ? 1 : 0) << ","
        << csv_field(r.objective) << "," << csv_field(r.delta_sq) << ","
        << csv_field(r.delta_hat_sq) << "," << csv_field(r.eta[0]) << ","
        << csv_field(r.eta[1]) << "," << csv_field(r.eta[2]) << ","
        << csv_field(r.eta_tilde[0]) << "," << csv_field(r.eta_tilde[1])
        << "," << csv_field(r.eta_tilde[2]) << ","
        << csv_field(r.tuning_loss) << "\n";
    out << r.rep << ",ula," << metrics_fields(r.ula)
        << ",,,,,,,,,,,,\n";
  }
  if (!out.good()) throw ParseError("short write to '" + path + "'");
}

struct AggRow {
  std::string method;
  Aggregate tpr1, fpr1, tpr2, fpr2, d;
};

std::vector<AggRow> aggregate_rows(const std::vector<RepResult>& reps) {
  auto collect = [&](auto getter) {
    std::vector<double> v;
    v.reserve(reps.size());
    for (const RepResult& r : reps) v.push_back(getter(r));
    return aggregate(v);
  };
  std::vector<AggRow> rows(2);
  rows[0].method = "glaa";
  rows[0].tpr1 = collect([](const RepResult& r) { return r.glaa.tpr[0]; });
  rows[0].fpr1 = collect([](const RepResult& r) { return r.glaa.fpr[0]; });
  rows[0].tpr2 = collect([](const RepResult& r) { return r.glaa.tpr[1]; });
  rows[0].fpr2 = collect([](const RepResult& r) { return r.glaa.fpr[1]; });
  rows[0].d = collect([](const RepResult& r) { return r.glaa.d_avg; });
  rows[1].method = "ula";
  rows[1].tpr1 = collect([](const RepResult& r) { return r.ula.tpr[0]; });
  rows[1].fpr1 = collect([](const RepResult& r) { return r.ula.fpr[0]; });
  rows[1].tpr2 = collect([](const RepResult& r) { return r.ula.tpr[1]; });
  rows[1].fpr2 = collect([](const RepResult& r) { return r.ula.fpr[1]; });
  rows[1].d = collect([](const RepResult& r) { return r.ula.d_avg; });
  return rows;
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggRow>& rows, int reps) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "method,tpr1_mean,tpr1_se,fpr1_mean,fpr1_se,tpr2_mean,tpr2_se,"
         "fpr2_mean,fpr2_se,d_mean,d_se,reps,note\n";
  const std::string note = reps == 1 ? "single_replication" : "";
  for (const AggRow& r : rows) {
    out << r.method << "," << csv_field(r.tpr1.mean) << ","
        << csv_field(r.tpr1.se) << "," << csv_field(r.fpr1.mean) << ","
        << csv_field(r.fpr1.se) << "," << csv_field(r.tpr2.mean) << ","
        << csv_field(r.tpr2.se) << "," << csv_field(r.fpr2.mean) << ","
        << csv_field(r.fpr2.se) << "," << csv_field(r.d.mean) << ","
        << csv_field(r.d.se) << "," << reps << "," << note << "\n";
  }
  if (!out.good()) throw ParseError("short write to '" + path + "'");
}

int cmd_simulate(const SimulateOptions& opt) {
  try {
    ScenarioSpec spec = scenario_preset(opt.scenario);
    if (opt.n > 0) spec.n = opt.n;
    if (opt.p1 > 0) spec.p[0] = opt.p1;
    if (opt.p2 > 0) spec.p[1] = opt.p2;
    if (opt.p3 > 0) {
      spec.p[2] = opt.p3;
      spec.s[2] = opt.p3 == 1 ? 1 : 5;
    }
    spec.f_kind = opt.f_kind == "sigmoid" ? FKind::sigmoid : FKind::sign;
    if (!opt.rho.empty()) spec.rho = {opt.rho[0], opt.rho[1]};
    spec.xi = opt.xi;
    try {
      spec.validate();
    } catch (const ValueError& e) {
      return fail(kConfig, "config", e.what());
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) return fail(kIo, "io", "cannot create '" + opt.out_dir + "'");

    const std::vector<RepResult> results =
        run_replications(spec, opt.reps, opt.seed, opt.harness);
    const std::vector<AggRow> rows = aggregate_rows(results);

    write_replications_csv(opt.out_dir + "/replications.csv", results);
    write_aggregate_csv(opt.out_dir + "/aggregate.csv", rows, opt.reps);

    json doc;
    doc["command"] = "simulate";
    doc["scenario"] = opt.scenario;
    doc["n"] = spec.n;
    doc["p"] = {spec.p[0], spec.p[1], spec.p[2]};
    doc["s"] = {spec.s[0], spec.s[1], spec.s[2]};
    doc["ranks"] = spec.ranks;
    doc["f"] = opt.f_kind;
    doc["rho"] = spec.rho;
    if (spec.f_kind == FKind::sigmoid) doc["xi"] = spec.xi;
    doc["reps"] = opt.reps;
    doc["seed"] = opt.seed;
    doc["protocol"] = {{"grid_size", opt.harness.grid_size},
                       {"split_fraction", opt.harness.split_fraction},
                       {"folds", opt.harness.folds},
                       {"init_keep", opt.harness.init_keep}};
    if (write_document(opt.out_dir + "/scenario.json", doc) != 0) {
      return fail(kIo, "io", "cannot write scenario.json");
    }

    std::printf("%-6s %-14s %-14s %-14s %-14s %-14s\n", "method", "TPR-1",
                "FPR-1", "TPR-2", "FPR-2", "D");
    for (const AggRow& r : rows) {
      std::printf("%-6s %.3f (%.3f)  %.3f (%.3f)  %.3f (%.3f)  %.3f (%.3f)  "
                  "%.3f (%.3f)\n",
                  r.method.c_str(), r.tpr1.mean, r.tpr1.se, r.fpr1.mean,
                  r.fpr1.se, r.tpr2.mean, r.tpr2.se, r.fpr2.mean, r.fpr2.se,
                  r.d.mean, r.d.se);
    }
    return kOk;
  } catch (const ParseError& e) {
    return fail(kIo, "io", e.what());
  } catch (const NumericError& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const ValueError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const DimensionError& e) {
    return fail(kDimension, "dimension", e.what());
  }
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json values = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", values}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& values = j.at("values");
  if (static_cast<Index>(values.size()) != rows * cols) {
    throw ParseError("matrix json: values length mismatch");
  }
  Matrix m(rows, cols);
  Index idx = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index jj = 0; jj < cols; ++jj) m(i, jj) = values[idx++].get<double>();
  }
  return m;
}

json tensor_to_json(const Tensor3& t) {
  json values = json::array();
  for (Index i = 0; i < t.size(); ++i) values.push_back(t.values()[i]);
  return json{{"dims", {t.dims()[0], t.dims()[1], t.dims()[2]}},
              {"values", values}};
}

Tensor3 tensor_from_json(const json& j) {
  const auto& dims = j.at("dims");
  Tensor3 t(dims[0].get<Index>(), dims[1].get<Index>(), dims[2].get<Index>());
  const auto& values = j.at("values");
  if (static_cast<Index>(values.size()) != t.size()) {
    throw ParseError("tensor json: values length mismatch");
  }
  for (Index i = 0; i < t.size(); ++i) t.values()[i] = values[i].get<double>();
  return t;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"generalized liquid association analysis"};
  app.require_subcommand(1);

  FitOptions fit_opt;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the sparse model");
  fit_cmd->add_option("--x", fit_opt.x_path)->required();
  fit_cmd->add_option("--y", fit_opt.y_path)->required();
  fit_cmd->add_option("--z", fit_opt.z_path)->required();
  fit_cmd->add_option("--ranks", fit_opt.ranks)
      ->required()
      ->delimiter(',')
      ->expected(3);
  fit_cmd->add_option("--eta", fit_opt.eta)->delimiter(',')->expected(3);
  fit_cmd->add_option("--eta-tilde", fit_opt.eta_tilde)
      ->delimiter(',')
      ->expected(3);
  fit_cmd->add_option("--init-keep", fit_opt.init_keep);
  fit_cmd->add_option("--max-iter", fit_opt.max_iter);
  fit_cmd->add_option("--tol", fit_opt.tol);
  fit_cmd->add_option("--out", fit_opt.out_path)->required();

  TuneOptions tune_opt;
  CLI::App* tune_cmd = app.add_subcommand("tune", "select thresholds");
  tune_cmd->add_option("--x", tune_opt.x_path)->required();
  tune_cmd->add_option("--y", tune_opt.y_path)->required();
  tune_cmd->add_option("--z", tune_opt.z_path)->required();
  tune_cmd->add_option("--ranks", tune_opt.ranks)
      ->required()
      ->delimiter(',')
      ->expected(3);
  tune_cmd->add_option("--grid-size", tune_opt.grid_size);
  tune_cmd->add_option("--split-frac", tune_opt.split_frac);
  tune_cmd->add_option("--seed", tune_opt.seed);
  tune_cmd->add_option("--folds", tune_opt.folds);
  tune_cmd->add_option("--init-keep", tune_opt.init_keep);
  tune_cmd->add_option("--search-keep", tune_opt.search_keep)->delimiter(',');
  tune_cmd->add_flag("--refit", tune_opt.refit);
  tune_cmd->add_flag("--no-screen-z", tune_opt.no_screen_z);
  tune_cmd->add_option("--out", tune_opt.out_path)->required();

  SimulateOptions sim_opt;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run scenario sweeps");
  sim_cmd->add_option("--scenario", sim_opt.scenario)->required();
  sim_cmd->add_option("--n", sim_opt.n);
  sim_cmd->add_option("--p1", sim_opt.p1);
  sim_cmd->add_option("--p2", sim_opt.p2);
  sim_cmd->add_option("--p3", sim_opt.p3);
  sim_cmd->add_option("--f", sim_opt.f_kind)
      ->check(CLI::IsMember({"sign", "sigmoid"}));
  sim_cmd->add_option("--rho", sim_opt.rho)->delimiter(',')->expected(2);
  sim_cmd->add_option("--xi", sim_opt.xi);
  sim_cmd->add_option("--reps", sim_opt.reps)->required();
  sim_cmd->add_option("--seed", sim_opt.seed);
  sim_cmd->add_option("--out", sim_opt.out_dir)->required();
  sim_cmd->add_option("--grid-size", sim_opt.harness.grid_size);
  sim_cmd->add_option("--split-frac", sim_opt.harness.split_fraction);
  sim_cmd->add_option("--folds", sim_opt.harness.folds);
  sim_cmd->add_option("--init-keep", sim_opt.harness.init_keep);

  GlaOptions gla_opt;
  CLI::App* gla_cmd = app.add_subcommand("gla", "sample GLA tensor");
  gla_cmd->add_option("--x", gla_opt.x_path)->required();
  gla_cmd->add_option("--y", gla_opt.y_path)->required();
  gla_cmd->add_option("--z", gla_opt.z_path)->required();
  gla_cmd->add_option("--ridge", gla_opt.ridge);
  gla_cmd->add_option("--out", gla_opt.out_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "glaa: error: usage: " << e.what() << "\n";
    return kUsage;
  }

  // Flag-level validation, before any file is touched.
  if (fit_cmd->parsed() || tune_cmd->parsed()) {
    const auto& ranks = fit_cmd->parsed() ? fit_opt.ranks : tune_opt.ranks;
    for (Index r : ranks) {
      if (r < 1) return fail(kUsage, "usage", "ranks must be positive");
    }
  }
  if (fit_cmd->parsed()) {
    if (!(fit_opt.init_keep > 0.0 && fit_opt.init_keep <= 1.0)) {
      return fail(kUsage, "usage", "--init-keep must lie in (0, 1]");
    }
    for (double e : fit_opt.eta) {
      if (e < 0) return fail(kUsage, "usage", "--eta must be nonnegative");
    }
    for (double e : fit_opt.eta_tilde) {
      if (e < 0) {
        return fail(kUsage, "usage", "--eta-tilde must be nonnegative");
      }
    }
    if (fit_opt.max_iter < 1 || !(fit_opt.tol > 0)) {
      return fail(kUsage, "usage", "--max-iter >= 1 and --tol > 0 required");
    }
    return cmd_fit(fit_opt);
  }
  if (tune_cmd->parsed()) {
    if (!(tune_opt.split_frac > 0.0 && tune_opt.split_frac < 1.0)) {
      return fail(kUsage, "usage", "--split-frac must lie in (0, 1)");
    }
    if (tune_opt.grid_size < 1 || tune_opt.folds < 1) {
      return fail(kUsage, "usage", "--grid-size and --folds must be >= 1");
    }
    return cmd_tune(tune_opt);
  }
  if (sim_cmd->parsed()) {
    if (sim_opt.reps < 1) {
      return fail(kUsage, "usage", "--reps must be >= 1");
    }
    if (sim_opt.scenario < 1 || sim_opt.scenario > 3) {
      return fail(kUsage, "usage", "--scenario must be 1, 2, or 3");
    }
    return cmd_simulate(sim_opt);
  }
  if (gla_cmd->parsed()) {
    if (gla_opt.ridge < 0.0) {
      return fail(kUsage, "usage", "--ridge must be nonnegative");
    }
    return cmd_gla(gla_opt);
  }
  return fail(kUsage, "usage", "no subcommand given");
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace glaa::cli
