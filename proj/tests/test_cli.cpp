// End-to-end checks of the command-line driver: subcommands, config
// handling, output files and exit codes (0 validation-clean, 1 validation
// error, 2 numerical failure).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FKDV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("convergence subcommand writes the pinned CSV") {
  const fs::path dir = fresh_dir("fkdv_cli_conv");
  const int rc = run_cli("convergence --preset bo --scheme cn --alphas 1.0 --Ns 64,128 --T 12 "
                         "--output_dir " + dir.string());
  CHECK(rc == 0);
  const std::string csv = slurp(dir / "convergence.csv");
  CHECK(csv.rfind("scheme,alpha,N,dx,dt,error,rate,C1,C2,C3,fp_iters,wall_s\n", 0) == 0);
  CHECK(csv.find("\ncn,1,64,") != std::string::npos);
  CHECK(csv.find("\ncn,1,128,") != std::string::npos);
}

TEST_CASE("run subcommand writes snapshot files") {
  const fs::path dir = fresh_dir("fkdv_cli_run");
  const int rc = run_cli("run --preset bo --scheme cn --N 64 --T 2 --output_dir " + dir.string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "u_t0.csv"));
  CHECK(fs::exists(dir / "u_t2.csv"));
  const std::string head = slurp(dir / "u_t2.csv").substr(0, 4);
  CHECK(head == "x,u\n");
}

TEST_CASE("consistency subcommand reports decreasing errors") {
  const fs::path dir = fresh_dir("fkdv_cli_cons");
  const int rc = run_cli("consistency --alpha 1.5 --Ns 32,64 --output_dir " + dir.string());
  CHECK(rc == 0);
  std::istringstream csv(slurp(dir / "consistency.csv"));
  std::string header, row1, row2;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  CHECK(header == "alpha,N,dx,error,order");
  auto error_of = [](const std::string& row) {
    std::istringstream cells(row);
    std::string cell;
    for (int i = 0; i <= 3; ++i) std::getline(cells, cell, ',');
    return std::stod(cell);
  };
  CHECK(error_of(row1) > error_of(row2));
}

TEST_CASE("invariants subcommand emits the time series") {
  const fs::path dir = fresh_dir("fkdv_cli_inv");
  const int rc = run_cli("invariants --preset bo --scheme cn --N 64 --T 3 --output_dir " +
                         dir.string());
  CHECK(rc == 0);
  CHECK(slurp(dir / "invariants.csv").rfind("t,C1,C2,C3\n", 0) == 0);
}

TEST_CASE("config files feed defaults that flags override") {
  const fs::path dir = fresh_dir("fkdv_cli_cfg");
  const fs::path cfg = dir / "study.cfg";
  std::ofstream(cfg) << "# bo study\npreset = bo\nscheme = cn\nNs = 64\nT = 6\noutput_dir = "
                     << dir.string() << "\n";
  CHECK(run_cli("convergence --config " + cfg.string()) == 0);
  const std::string csv = slurp(dir / "convergence.csv");
  CHECK(csv.find("\ncn,1,64,") != std::string::npos);

  // command line wins over the file
  CHECK(run_cli("convergence --config " + cfg.string() + " --Ns 128") == 0);
  CHECK(slurp(dir / "convergence.csv").find("\ncn,1,128,") != std::string::npos);
}

TEST_CASE("unknown config keys exit with a validation error") {
  const fs::path dir = fresh_dir("fkdv_cli_badcfg");
  const fs::path cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "preset = bo\nwarp_factor = 9\n";
  CHECK(run_cli("run --config " + cfg.string()) == 1);
}

TEST_CASE("validation errors exit 1, numerical failures exit 2") {
  const fs::path dir = fresh_dir("fkdv_cli_exit");
  CHECK(run_cli("run --preset nonsense --output_dir " + dir.string()) == 1);
  CHECK(run_cli("run --preset bo --N 2 --output_dir " + dir.string()) == 1);
  // an explicit step far past the contraction bound diverges
  CHECK(run_cli("run --preset bo --scheme cn --N 64 --T 60 --dt_policy explicit_value "
                "--dt 30 --fp_max_iters 30 --output_dir " + dir.string()) == 2);
}
