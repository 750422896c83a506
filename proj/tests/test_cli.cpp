#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "welfair/model.hpp"

// Drives the installed binary as a subprocess; every case works in its own
// scratch directory so runs cannot interfere.

namespace {

namespace fs = std::filesystem;

std::string scratch_root() {
  static std::string root = [] {
    std::string r = "/tmp/welfair_cli_" + std::to_string(getpid());
    fs::remove_all(r);
    fs::create_directories(r);
    return r;
  }();
  return root;
}

std::string case_dir(const std::string& name) {
  std::string dir = scratch_root() + "/" + name;
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& dir, const std::string& args) {
  std::string cmd = "cd " + dir + " && " + WELFAIR_CLI_PATH + " " + args +
                    " > cli_out.txt 2> cli_err.txt";
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir + "/cli_out.txt");
  r.err = slurp(dir + "/cli_err.txt");
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

// header-keyed view of one results row
std::map<std::string, std::string> parse_row(const std::string& header,
                                             const std::string& line) {
  std::vector<std::string> names = split_csv(header);
  std::vector<std::string> cells = split_csv(line);
  REQUIRE(names.size() == cells.size());
  std::map<std::string, std::string> row;
  for (std::size_t i = 0; i < names.size(); ++i) row[names[i]] = cells[i];
  return row;
}

double num(const std::map<std::string, std::string>& row,
           const std::string& key) {
  auto it = row.find(key);
  REQUIRE(it != row.end());
  REQUIRE(!it->second.empty());
  return std::stod(it->second);
}

const std::string kAwkwardCsv = "x,y\n0,2\n0.33333333,0\n0.66666667,2\n1,0\n";

}  // namespace

TEST_CASE("generator is deterministic and validates its arguments") {
  std::string dir = case_dir("gen");
  Run a = cli(dir, "gen --n 40 --k 3 --seed 11 --out a.csv --truth at.txt");
  REQUIRE(a.code == 0);
  Run b = cli(dir, "gen --n 40 --k 3 --seed 11 --out b.csv --truth bt.txt");
  REQUIRE(b.code == 0);
  CHECK(slurp(dir + "/a.csv") == slurp(dir + "/b.csv"));
  CHECK(slurp(dir + "/at.txt") == slurp(dir + "/bt.txt"));

  Run other = cli(dir, "gen --n 40 --k 3 --seed 12 --out c.csv");
  REQUIRE(other.code == 0);
  CHECK(slurp(dir + "/a.csv") != slurp(dir + "/c.csv"));

  Run bad = cli(dir, "gen --n 0 --k 3 --out d.csv");
  CHECK(bad.code == 3);
  CHECK(bad.err.find("error kind=InvalidArgument") == 0);
}

TEST_CASE("training lifts the intercept by the predicted amount") {
  std::string dir = case_dir("train");
  REQUIRE(cli(dir, "gen --n 200 --k 5 --seed 7 --out d.csv --truth t.txt")
              .code == 0);
  Run run = cli(dir, "train --data d.csv --label y --alpha 0.5 --tau 4 "
                     "--out m.txt");
  REQUIRE(run.code == 0);

  welfair::LinearModel truth = welfair::load_model(dir + "/t.txt");
  welfair::LinearModel fitted = welfair::load_model(dir + "/m.txt");
  REQUIRE(fitted.weights.size() == truth.weights.size());
  // tau^(1/alpha) - 1 = 15 shift along the constant coordinate
  CHECK(std::fabs(fitted.weights.back() - truth.weights.back() - 15.0) <
        1e-3);
  for (std::size_t j = 0; j + 1 < truth.weights.size(); ++j)
    CHECK(std::fabs(fitted.weights[j] - truth.weights[j]) < 1e-4);

  auto out = lines_of(run.out);
  REQUIRE(out.size() == 2);
  auto row = parse_row(out[0], out[1]);
  CHECK(row["status"] == "optimal");
  CHECK(std::fabs(num(row, "lambda") - 240.0) < 240.0 * 1e-3);
  CHECK(std::fabs(num(row, "welfare") - 4.0) < 1e-6);
}

TEST_CASE("slack bound trains to least squares") {
  std::string dir = case_dir("slack");
  REQUIRE(cli(dir, "gen --n 50 --k 3 --seed 3 --out d.csv").code == 0);
  Run run = cli(dir, "train --data d.csv --label y --alpha 0.5 --tau 0.01 "
                     "--out m.txt");
  REQUIRE(run.code == 0);
  auto out = lines_of(run.out);
  auto row = parse_row(out[0], out[1]);
  CHECK(row["status"] == "optimal");
  CHECK(row["lambda"] == "0");
  CHECK(num(row, "loss") < 1e-10);
}

TEST_CASE("malformed data exits three with no model written") {
  std::string dir = case_dir("badcsv");
  write_file(dir + "/bad.csv", "x,y\n0,abc\n1,2\n");
  Run run = cli(dir, "train --data bad.csv --label y --out never.txt");
  CHECK(run.code == 3);
  CHECK(run.err.find("error kind=MalformedNumber") == 0);
  CHECK_FALSE(fs::exists(dir + "/never.txt"));
}

TEST_CASE("infeasible bound exits two with no model written") {
  std::string dir = case_dir("infeasible");
  write_file(dir + "/d.csv", kAwkwardCsv);
  Run run = cli(dir, "train --data d.csv --label y --alpha 0.5 --tau 4 "
                     "--lambda-max 10 --out never.txt");
  CHECK(run.code == 2);
  CHECK(run.err.find("error kind=Infeasible") == 0);
  CHECK_FALSE(fs::exists(dir + "/never.txt"));
}

TEST_CASE("sweep covers the grid and matches single training") {
  std::string dir = case_dir("sweep");
  REQUIRE(cli(dir, "gen --n 60 --k 3 --seed 5 --out d.csv").code == 0);

  Run grid = cli(dir, "sweep --data d.csv --label y --alphas 0.3,0.5 "
                      "--taus 1.2,1.5,2 --out r.csv --jobs 2");
  REQUIRE(grid.code == 0);
  auto rows = lines_of(slurp(dir + "/r.csv"));
  REQUIRE(rows.size() == 7);  // header + 2 alphas x 3 taus

  // rows arrive sorted by (alpha, tau)
  double prev_a = 0.0, prev_t = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto row = parse_row(rows[0], rows[i]);
    double a = num(row, "alpha"), t = num(row, "tau");
    if (i > 1) CHECK((a > prev_a || (a == prev_a && t > prev_t)));
    prev_a = a;
    prev_t = t;
    CHECK(row["status"] == "optimal");
  }

  // a single-cell sweep and a train run print the same row
  Run one = cli(dir, "sweep --data d.csv --label y --alphas 0.5 --taus 2 "
                     "--out one.csv");
  REQUIRE(one.code == 0);
  Run train = cli(dir, "train --data d.csv --label y --alpha 0.5 --tau 2 "
                       "--out m.txt");
  REQUIRE(train.code == 0);
  CHECK(lines_of(slurp(dir + "/one.csv"))[1] == lines_of(train.out)[1]);

  // the worker count cannot change the table
  Run serial = cli(dir, "sweep --data d.csv --label y --alphas 0.3,0.5 "
                        "--taus 1.2,1.5,2 --out r1.csv --jobs 1");
  REQUIRE(serial.code == 0);
  CHECK(slurp(dir + "/r.csv") == slurp(dir + "/r1.csv"));
}

TEST_CASE("sweep records infeasible cells and keeps going") {
  std::string dir = case_dir("sweepinf");
  write_file(dir + "/d.csv", kAwkwardCsv);
  Run run = cli(dir, "sweep --data d.csv --label y --alphas 0.5 "
                     "--taus 0.95,4 --lambda-max 100 --out r.csv");
  REQUIRE(run.code == 0);
  auto rows = lines_of(slurp(dir + "/r.csv"));
  REQUIRE(rows.size() == 3);
  auto good = parse_row(rows[0], rows[1]);
  auto bad = parse_row(rows[0], rows[2]);
  CHECK(good["status"] == "optimal");
  CHECK(num(good, "welfare") >= 0.95 - 1e-6);
  CHECK(bad["status"] == "infeasible");
  CHECK(bad["loss"].empty());
  CHECK(bad["tau"] == "4");
}

TEST_CASE("sweep rows recompute from saved models") {
  std::string dir = case_dir("recompute");
  REQUIRE(cli(dir, "gen --n 80 --k 4 --seed 9 --out d.csv").code == 0);
  Run run = cli(dir, "sweep --data d.csv --label y --alphas 0.5 --taus 1.5,3 "
                     "--out r.csv --models-dir models");
  REQUIRE(run.code == 0);
  auto rows = lines_of(slurp(dir + "/r.csv"));
  REQUIRE(rows.size() == 3);

  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto swept = parse_row(rows[0], rows[i]);
    std::string model =
        "models/model_a0_t" + std::to_string(i - 1) + "_f0.txt";
    REQUIRE(fs::exists(dir + "/" + model));
    Run again = cli(dir, "metrics --data d.csv --label y --model " + model +
                             " --alpha 0.5");
    REQUIRE(again.code == 0);
    auto out = lines_of(again.out);
    auto re = parse_row(out[0], out[1]);
    for (const char* col : {"loss", "welfare", "atkinson", "ge2",
                            "dwork_violation", "intercept"})
      CHECK(std::fabs(num(swept, col) - num(re, col)) <= 1e-9);
  }
}

TEST_CASE("ranking matches the worked example") {
  std::string dir = case_dir("rank");
  // labels of zero turn a prediction p into benefit p + 1, so these files
  // realize the flat 0.9 profile and the {0.6, 1.0, 1.0, 1.1} profile
  write_file(dir + "/labels.txt", "0\n0\n0\n0\n");
  write_file(dir + "/flat.txt", "-0.1\n-0.1\n-0.1\n-0.1\n");
  write_file(dir + "/mixed.txt", "-0.4\n0\n0\n0.1\n");

  Run run = cli(dir, "rank flat.txt mixed.txt --labels labels.txt "
                     "--alpha 0.5 --measure welfare");
  REQUIRE(run.code == 0);
  auto out = lines_of(run.out);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == "fold,rank,file,score,measure");
  auto first = split_csv(out[1]);
  auto second = split_csv(out[2]);
  CHECK(first[2] == "mixed.txt");
  CHECK(second[2] == "flat.txt");
  CHECK(std::fabs(std::stod(first[3]) - 0.955851379352908731) < 1e-12);
  CHECK(std::fabs(std::stod(second[3]) - 0.94868329805051380) < 1e-12);

  // identical scores tie-break by filename
  write_file(dir + "/aaa.txt", "-0.1\n-0.1\n-0.1\n-0.1\n");
  Run tie = cli(dir, "rank flat.txt aaa.txt --labels labels.txt");
  REQUIRE(tie.code == 0);
  auto tied = lines_of(tie.out);
  CHECK(split_csv(tied[1])[2] == "aaa.txt");
  CHECK(split_csv(tied[2])[2] == "flat.txt");

  // a short file is rejected before any scoring
  write_file(dir + "/short.txt", "0\n0\n");
  Run bad = cli(dir, "rank short.txt --labels labels.txt");
  CHECK(bad.code == 3);
  CHECK(bad.err.find("error kind=LengthMismatch") == 0);

  // a scoring failure leaves stdout empty instead of a dangling header
  write_file(dir + "/sunk.txt", "-2\n0\n0\n0\n");
  Run sunk = cli(dir, "rank sunk.txt --labels labels.txt");
  CHECK(sunk.code == 3);
  CHECK(sunk.err.find("error kind=NonPositiveBenefit") == 0);
  CHECK(sunk.out.empty());
}

TEST_CASE("metrics reproduces the four-person report") {
  std::string dir = case_dir("metrics");
  write_file(dir + "/d.csv", "x,y,g\n1,1,0\n2,1,0\n3,1,1\n4,1,1\n");
  write_file(dir + "/p.txt", "0.6\n1.0\n1.0\n1.1\n");
  Run run = cli(dir, "metrics --data d.csv --label y --group g "
                     "--predictions p.txt --alpha 0.5");
  REQUIRE(run.code == 0);
  auto out = lines_of(run.out);
  auto row = parse_row(out[0], out[1]);
  CHECK(std::fabs(num(row, "welfare") - 0.955851379352908731) < 1e-12);
  CHECK(std::fabs(num(row, "dwork_violation") - 0.25) < 1e-9);
  CHECK(std::fabs(num(row, "mean_diff") - 0.25) < 1e-12);
  CHECK(std::fabs(num(row, "neg_residual_diff") - 0.4) < 1e-12);
  CHECK(std::fabs(num(row, "loss") - 0.0425) < 1e-12);

  // perfect predictions zero out every violation and inequality column
  write_file(dir + "/perfect.txt", "1\n1\n1\n1\n");
  Run zero = cli(dir, "metrics --data d.csv --label y --group g "
                      "--predictions perfect.txt");
  REQUIRE(zero.code == 0);
  auto zout = lines_of(zero.out);
  auto zrow = parse_row(zout[0], zout[1]);
  CHECK(num(zrow, "loss") == 0.0);
  CHECK(num(zrow, "dwork_violation") == 0.0);
  CHECK(num(zrow, "atkinson") == 0.0);
  CHECK(num(zrow, "ge2") == 0.0);
  CHECK(num(zrow, "mean_diff") == 0.0);
}

TEST_CASE("margin mechanism with no selection reports the plain fit") {
  std::string dir = case_dir("mechplain");
  write_file(dir + "/d.csv", "x1,x2,y\n0,0,0\n1,0,1\n0,1,0.3\n");
  Run mech = cli(dir, "mechanism --data d.csv --label y --kind dwork_delta "
                      "--delta-unbounded --out mm.txt");
  REQUIRE(mech.code == 0);
  CHECK(mech.out.find("added_constraints=0") != std::string::npos);

  Run train = cli(dir, "train --data d.csv --label y --alpha 0.5 "
                       "--tau 0.01 --out mt.txt");
  REQUIRE(train.code == 0);
  welfair::LinearModel a = welfair::load_model(dir + "/mm.txt");
  welfair::LinearModel b = welfair::load_model(dir + "/mt.txt");
  REQUIRE(a.weights.size() == b.weights.size());
  for (std::size_t j = 0; j < a.weights.size(); ++j)
    CHECK(std::fabs(a.weights[j] - b.weights[j]) < 1e-6);
}

TEST_CASE("net and spread mechanisms report their extras") {
  std::string dir = case_dir("mechextra");
  REQUIRE(cli(dir, "gen --n 30 --k 3 --seed 19 --out d.csv").code == 0);

  Run net = cli(dir, "mechanism --data d.csv --label y --kind epsilon_net "
                     "--eps 1.0 --out n.txt");
  REQUIRE(net.code == 0);
  CHECK(net.out.find("representatives=1") != std::string::npos);

  Run spread = cli(dir, "mechanism --data d.csv --label y --kind speicher "
                        "--tau 1000000 --out s.txt");
  REQUIRE(spread.code == 0);
  CHECK(spread.out.find("mu=") != std::string::npos);
  auto out = lines_of(spread.out);
  REQUIRE(out.size() == 3);
  auto row = parse_row(out[1], out[2]);
  CHECK(num(row, "ge2") <= 1e6);

  Run unknown = cli(dir, "mechanism --data d.csv --label y --kind nope");
  CHECK(unknown.code == 3);
  CHECK(unknown.err.find("error kind=InvalidArgument") == 0);
}

TEST_CASE("config file values yield to explicit flags") {
  std::string dir = case_dir("config");
  REQUIRE(cli(dir, "gen --n 40 --k 3 --seed 2 --out d.csv").code == 0);
  write_file(dir + "/run.ini",
             "[train]\ndata=d.csv\nlabel=y\nalpha=0.5\ntau=2\n");

  Run from_cfg = cli(dir, "train --config run.ini --out a.txt");
  REQUIRE(from_cfg.code == 0);
  auto row = parse_row(lines_of(from_cfg.out)[0], lines_of(from_cfg.out)[1]);
  CHECK(row["tau"] == "2");

  Run overridden = cli(dir, "train --config run.ini --tau 4 --out b.txt");
  REQUIRE(overridden.code == 0);
  auto row2 =
      parse_row(lines_of(overridden.out)[0], lines_of(overridden.out)[1]);
  CHECK(row2["tau"] == "4");
  CHECK(std::fabs(num(row2, "welfare") - 4.0) < 1e-6);
}
