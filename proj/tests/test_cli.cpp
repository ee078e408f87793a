#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "glaa/csv.hpp"
#include "glaa/simulation.hpp"
#include "test_support.hpp"

using namespace glaa;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("glaa_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_csv(const fs::path& path, const Matrix& m,
               const std::string& header = "") {
  std::ofstream out(path);
  if (!header.empty()) out << header << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const fs::path& path) { return json::parse(slurp(path)); }

// Small but realistic inputs: scenario-3 shaped data at reduced size.
struct Fixture {
  fs::path dir, x, y, z;
  Dataset data;
};

Fixture make_fixture(const std::string& tag, Index n = 80) {
  Fixture f;
  f.dir = fresh_dir(tag);
  ScenarioSpec spec = scenario_preset(3);
  spec.n = n;
  spec.p = {12, 8, 1};
  spec.seed = 321;
  auto [d, truth] = generate(spec);
  f.data = d;
  f.x = f.dir / "x.csv";
  f.y = f.dir / "y.csv";
  f.z = f.dir / "z.csv";
  write_csv(f.x, d.x);
  write_csv(f.y, d.y);
  write_csv(f.z, d.z);
  return f;
}

json strip_timestamp(json doc) {
  doc.erase("timestamp");
  return doc;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("read_csv_matrix basics") {
  const fs::path dir = fresh_dir("csv");
  {
    std::ofstream out(dir / "plain.csv");
    out << "1.5,2\n-3,4e-2\n";
  }
  const Matrix plain = read_csv_matrix((dir / "plain.csv").string());
  CHECK(plain.rows() == 2);
  CHECK(plain(0, 0) == 1.5);
  CHECK(plain(1, 1) == 0.04);

  {
    std::ofstream out(dir / "header.csv");
    out << "alpha,beta\r\n1,2\n3,4\n";
  }
  const Matrix with_header = read_csv_matrix((dir / "header.csv").string());
  CHECK(with_header.rows() == 2);
  CHECK(with_header(1, 0) == 3.0);

  {
    std::ofstream out(dir / "ragged.csv");
    out << "1,2\n3\n";
  }
  CHECK_THROWS_AS(read_csv_matrix((dir / "ragged.csv").string()), ParseError);

  {
    std::ofstream out(dir / "bad.csv");
    out << "1,2\n3,oops\n";
  }
  CHECK_THROWS_AS(read_csv_matrix((dir / "bad.csv").string()), ParseError);
  CHECK_THROWS_AS(read_csv_matrix((dir / "missing.csv").string()),
                  ParseError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, -0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("fit end to end") {
  Fixture f = make_fixture("fit");
  const fs::path out = f.dir / "result.json";
  const int rc = cli::run_cli({"fit", "--x", f.x.string(), "--y",
                               f.y.string(), "--z", f.z.string(), "--ranks",
                               "2,2,1", "--out", out.string()});
  CHECK(rc == cli::kOk);
  const json doc = load_json(out);
  CHECK(doc.at("command") == "fit");
  CHECK(doc.at("fit").at("converged").get<bool>());
  CHECK(doc.at("fit").at("iterations").get<int>() <= 100);
  CHECK(doc.at("data").at("n").get<int>() == 80);

  // loadings round-trip at full precision and carry orthonormal columns
  const Matrix g1 = cli::matrix_from_json(doc.at("fit").at("loadings")[0]);
  CHECK(g1.rows() == 12);
  CHECK(g1.cols() == 2);
  CHECK((g1.transpose() * g1 - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-8);
  const json round = cli::matrix_to_json(g1);
  CHECK((cli::matrix_from_json(round) - g1).cwiseAbs().maxCoeff() == 0.0);

  // scores have one row per observation
  CHECK(cli::matrix_from_json(doc.at("scores").at("x")).rows() == 80);

  // determinism: a second run differs only in the timestamp
  const fs::path out2 = f.dir / "result2.json";
  CHECK(cli::run_cli({"fit", "--x", f.x.string(), "--y", f.y.string(), "--z",
                      f.z.string(), "--ranks", "2,2,1", "--out",
                      out2.string()}) == cli::kOk);
  CHECK(strip_timestamp(load_json(out)) == strip_timestamp(load_json(out2)));
}

TEST_CASE("fit rejects bad inputs with distinct exit codes") {
  Fixture f = make_fixture("fiterr");

  // rank flag invalid: usage error before any file is read (paths do not
  // exist)
  CHECK(cli::run_cli({"fit", "--x", "/nonexistent/x.csv", "--y",
                      "/nonexistent/y.csv", "--z", "/nonexistent/z.csv",
                      "--ranks", "0,1,1", "--out",
                      (f.dir / "o.json").string()}) == cli::kUsage);

  // missing file: parse error
  CHECK(cli::run_cli({"fit", "--x", (f.dir / "nope.csv").string(), "--y",
                      f.y.string(), "--z", f.z.string(), "--ranks", "1,1,1",
                      "--out", (f.dir / "o.json").string()}) == cli::kParse);

  // mismatched row counts: dimension error
  write_csv(f.dir / "short.csv", f.data.y.topRows(40));
  CHECK(cli::run_cli({"fit", "--x", f.x.string(), "--y",
                      (f.dir / "short.csv").string(), "--z", f.z.string(),
                      "--ranks", "1,1,1", "--out",
                      (f.dir / "o.json").string()}) == cli::kDimension);

  // rank exceeding the data dimension: config error
  CHECK(cli::run_cli({"fit", "--x", f.x.string(), "--y", f.y.string(), "--z",
                      f.z.string(), "--ranks", "13,2,1", "--out",
                      (f.dir / "o.json").string()}) == cli::kConfig);

  // unwritable output: io error
  CHECK(cli::run_cli({"fit", "--x", f.x.string(), "--y", f.y.string(), "--z",
                      f.z.string(), "--ranks", "2,2,1", "--out",
                      "/nonexistent_dir/out.json"}) == cli::kIo);
}

TEST_CASE("tune end to end with refit") {
  Fixture f = make_fixture("tune", 100);
  const fs::path out = f.dir / "tune.json";
  const int rc = cli::run_cli(
      {"tune", "--x", f.x.string(), "--y", f.y.string(), "--z", f.z.string(),
       "--ranks", "2,2,1", "--grid-size", "3", "--split-frac", "0.5",
       "--seed", "9", "--refit", "--out", out.string()});
  CHECK(rc == cli::kOk);
  const json doc = load_json(out);
  CHECK(doc.at("command") == "tune");
  const auto& table = doc.at("tuning").at("loss_table");
  CHECK(table.size() == 16);  // (3+1)^2 x 1 for the scalar z mode
  double best = table[0].at("loss").get<double>();
  for (const auto& e : table) {
    best = std::min(best, e.at("loss").get<double>());
  }
  CHECK(doc.at("tuning").at("best_loss").get<double>() ==
        doctest::Approx(best));
  CHECK(doc.contains("refit"));

  // determinism modulo timestamp
  const fs::path out2 = f.dir / "tune2.json";
  CHECK(cli::run_cli({"tune", "--x", f.x.string(), "--y", f.y.string(), "--z",
                      f.z.string(), "--ranks", "2,2,1", "--grid-size", "3",
                      "--split-frac", "0.5", "--seed", "9", "--refit",
                      "--out", out2.string()}) == cli::kOk);
  CHECK(strip_timestamp(load_json(out)) == strip_timestamp(load_json(out2)));
}

TEST_CASE("gla command") {
  Fixture f = make_fixture("gla", 60);
  const fs::path out = f.dir / "phi.json";
  CHECK(cli::run_cli({"gla", "--x", f.x.string(), "--y", f.y.string(), "--z",
                      f.z.string(), "--out", out.string()}) == cli::kOk);
  const json doc = load_json(out);
  const Tensor3 phi = cli::tensor_from_json(doc);

  // p3 = 1 with nearly unit-variance z: phi is close to the moment tensor
  const Dataset centered = center(f.data);
  const Tensor3 delta = sample_delta(centered);
  const double zvar = centered.z.col(0).squaredNorm() / (60.0 - 1.0);
  CHECK((phi.values() * zvar - delta.values()).cwiseAbs().maxCoeff() < 1e-10);

  // p3 > n: singular covariance must be reported with advice, and the
  // ridge flag must unblock it
  const fs::path wide_dir = fresh_dir("glawide");
  Rng rng(404);
  Matrix zwide = glaa::testing::random_matrix(rng, 10, 14);
  write_csv(wide_dir / "z.csv", zwide);
  write_csv(wide_dir / "x.csv", glaa::testing::random_matrix(rng, 10, 3));
  write_csv(wide_dir / "y.csv", glaa::testing::random_matrix(rng, 10, 2));
  CHECK(cli::run_cli({"gla", "--x", (wide_dir / "x.csv").string(), "--y",
                      (wide_dir / "y.csv").string(), "--z",
                      (wide_dir / "z.csv").string(), "--out",
                      (wide_dir / "phi.json").string()}) == cli::kNumeric);
  CHECK(cli::run_cli({"gla", "--x", (wide_dir / "x.csv").string(), "--y",
                      (wide_dir / "y.csv").string(), "--z",
                      (wide_dir / "z.csv").string(), "--ridge", "0.1",
                      "--out", (wide_dir / "phi.json").string()}) == cli::kOk);
}

TEST_CASE("simulate writes deterministic outputs") {
  const fs::path dir1 = fresh_dir("sim1");
  const fs::path dir2 = fresh_dir("sim2");
  const std::vector<std::string> base = {
      "simulate", "--scenario", "3",    "--n",    "60",  "--p1", "20",
      "--p2",     "10",         "--reps", "2",    "--seed", "77",
      "--grid-size", "3",       "--folds", "2"};
  auto with_out = [&](const fs::path& d) {
    std::vector<std::string> args = base;
    args.push_back("--out");
    args.push_back(d.string());
    return args;
  };
  CHECK(cli::run_cli(with_out(dir1)) == cli::kOk);
  CHECK(cli::run_cli(with_out(dir2)) == cli::kOk);
  CHECK(slurp(dir1 / "replications.csv") == slurp(dir2 / "replications.csv"));
  CHECK(slurp(dir1 / "aggregate.csv") == slurp(dir2 / "aggregate.csv"));
  CHECK(slurp(dir1 / "scenario.json") == slurp(dir2 / "scenario.json"));

  // header sanity + one glaa and one ula row per replication
  std::istringstream reps(slurp(dir1 / "replications.csv"));
  std::string line;
  int lines = 0, glaa_rows = 0, ula_rows = 0;
  while (std::getline(reps, line)) {
    ++lines;
    if (line.find(",glaa,") != std::string::npos) ++glaa_rows;
    if (line.find(",ula,") != std::string::npos) ++ula_rows;
  }
  CHECK(lines == 5);
  CHECK(glaa_rows == 2);
  CHECK(ula_rows == 2);

  // invalid scenario parameters fail before any replication runs
  const fs::path dir3 = fresh_dir("sim3");
  CHECK(cli::run_cli({"simulate", "--scenario", "3", "--rho", "2,0.5",
                      "--reps", "1", "--out", dir3.string()}) == cli::kConfig);
  CHECK(cli::run_cli({"simulate", "--scenario", "9", "--reps", "1", "--out",
                      dir3.string()}) == cli::kUsage);
  CHECK(cli::run_cli({"simulate", "--scenario", "3", "--reps", "0", "--out",
                      dir3.string()}) == cli::kUsage);
}

TEST_CASE("installed binary smoke test") {
  Fixture f = make_fixture("bin", 40);
  const fs::path out = f.dir / "result.json";
  std::ostringstream cmd;
  cmd << GLAA_BIN_PATH << " fit --x " << f.x << " --y " << f.y << " --z "
      << f.z << " --ranks 2,2,1 --out " << out << " > /dev/null 2>&1";
  const int rc = std::system(cmd.str().c_str());
  CHECK(rc != -1);
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(load_json(out).at("command") == "fit");

  std::ostringstream bad;
  bad << GLAA_BIN_PATH << " fit --ranks 1,1,1 > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(bad.str().c_str())) == cli::kUsage);
}

TEST_SUITE_END();
