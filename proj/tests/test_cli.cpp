#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "qpm/json_io.hpp"
#include "test_support.hpp"

// QPM_CLI_PATH is injected by the build.

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + QPM_CLI_PATH + " " + args +
                          " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_fixture(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/qpm_cli_test_" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

std::string matrix_file(const std::string& name, const qpm::CMatrix& m) {
  return write_fixture(name, qpm::json_to_string(qpm::matrix_to_json(m)));
}

const std::string kZPath = matrix_file("z.json", qpm::CMatrix(
    2, 2, {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}));

}  // namespace

TEST_CASE("decompose") {
  SUBCASE("diagonal observable") {
    const CliResult r = run_cli("decompose --input " + kZPath);
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["measurement"].size() == 2);
    CHECK(j["measurement"][0]["value"].get<double>() == 1.0);
    CHECK(j["measurement"][1]["value"].get<double>() == -1.0);
    CHECK(j["residual"].get<double>() <= 1e-12);
  }
  SUBCASE("identity has a single full-space outcome") {
    const std::string path = matrix_file("i4.json", qpm::CMatrix::identity(4));
    const CliResult r = run_cli("decompose --input " + path);
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["measurement"].size() == 1);
    CHECK(j["measurement"][0]["value"].get<double>() == 1.0);
    CHECK(qpm::matrix_from_json(j["measurement"][0]["proj"]) ==
          qpm::CMatrix::identity(4));
  }
  SUBCASE("non-square input is a schema violation") {
    const std::string path = matrix_file("rect.json", qpm::CMatrix::zero(2, 3));
    CHECK(run_cli("decompose --input " + path).exit_code == 2);
  }
  SUBCASE("non-hermitian input is a domain error") {
    const std::string path = matrix_file(
        "nonherm.json", qpm::CMatrix(2, 2, {{0, 0}, {1, 0}, {0, 0}, {0, 0}}));
    CHECK(run_cli("decompose --input " + path).exit_code == 3);
  }
  SUBCASE("unparseable input") {
    const std::string path = write_fixture("broken.json", "{\"rows\": 2,");
    CHECK(run_cli("decompose --input " + path).exit_code == 2);
  }
  SUBCASE("missing file") {
    CHECK(run_cli("decompose --input /tmp/qpm_no_such_file.json").exit_code == 2);
  }
}

TEST_CASE("measure") {
  const std::string rho0 = matrix_file(
      "rho0.json", qpm::rank1proj(qpm::CVector({{1, 0}, {0, 0}})));

  SUBCASE("eigenstate: certain outcome plus zero-branch collapse") {
    const CliResult r = run_cli("measure --state " + rho0 + " --observable " + kZPath);
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["value"].get<double>() == 1.0);
    CHECK(j[0]["probability"].get<double>() == 1.0);
    CHECK(qpm::density_from_json(j[0]["collapsed"]) ==
          qpm::DensityOperator(qpm::rank1proj(qpm::CVector({{1, 0}, {0, 0}}))));
    CHECK(j[1]["probability"].get<double>() == 0.0);
    CHECK(qpm::density_from_json(j[1]["collapsed"]) == qpm::max_mixed(2));
  }
  SUBCASE("maximally mixed state sees both outcomes equally") {
    const std::string mixed = write_fixture(
        "mixed.json", qpm::json_to_string(qpm::density_to_json(qpm::max_mixed(2))));
    const CliResult r = run_cli("measure --state " + mixed + " --observable " + kZPath);
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j[0]["probability"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j[1]["probability"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("bell state measured on one side is an unbiased coin") {
    const std::string bell = matrix_file(
        "bell.json", qpm::rank1proj(qpm::bell_state(qpm::BellKind::PsiMinus)));
    const std::string zi = matrix_file(
        "zi.json", qpm::tensor(qpm::CMatrix(2, 2, {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}),
                               qpm::CMatrix::identity(2)));
    const CliResult r = run_cli("measure --state " + bell + " --observable " + zi);
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 2);
    // independent hand value: diag(rho) = (0,.5,.5,0), P(+1) sums the first two
    CHECK(j[0]["probability"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j[1]["probability"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("invalid density is a domain error") {
    const std::string bad = matrix_file("bad_density.json", qpm::CMatrix::identity(2));
    CHECK(run_cli("measure --state " + bad + " --observable " + kZPath).exit_code == 3);
  }
  SUBCASE("dimension mismatch is a domain error") {
    const std::string mixed4 = write_fixture(
        "mixed4.json", qpm::json_to_string(qpm::density_to_json(qpm::max_mixed(4))));
    CHECK(run_cli("measure --state " + mixed4 + " --observable " + kZPath).exit_code ==
          3);
  }
  SUBCASE("csv format") {
    const CliResult r =
        run_cli("measure --state " + rho0 + " --observable " + kZPath + " --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "value,probability\n1,1\n-1,0\n");
  }
}

TEST_CASE("chsh-quantum") {
  const CliResult r = run_cli("chsh-quantum");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["s"].get<double>() ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(j["violated"].get<bool>());
  CHECK(j["classical_bound"].get<double>() == 2.0);

  const CliResult csv = run_cli("chsh-quantum --format csv");
  CHECK(csv.out.rfind("zi_ixpz,xi_ixpz,xi_izmx,zi_izmx,s,classical_bound,violated\n",
                      0) == 0);

  const CliResult human = run_cli("chsh-quantum --format human");
  CHECK(human.out.find("S = ") != std::string::npos);
}

TEST_CASE("chsh-lhv") {
  SUBCASE("trials are required") {
    CHECK(run_cli("chsh-lhv").exit_code == 2);
  }
  SUBCASE("bound holds and output is deterministic") {
    const CliResult a = run_cli("chsh-lhv --trials 2000 --seed 7");
    const CliResult b = run_cli("chsh-lhv --trials 2000 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);  // byte-identical
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["max_abs_s"].get<double>() <= 2.0 + 1e-9);
    CHECK(j["deterministic_max"].get<double>() == 2.0);
    CHECK(j["trials"].get<std::uint64_t>() == 2000);
    CHECK(j["seed"].get<std::uint64_t>() == 7);
  }
  SUBCASE("worker count never shows in the bytes") {
    const CliResult one = run_cli("chsh-lhv --trials 2000 --seed 7 --workers 1");
    const CliResult four = run_cli("chsh-lhv --trials 2000 --seed 7 --workers 4");
    CHECK(one.out == four.out);
  }
  SUBCASE("QPM_SEED env fallback") {
    const CliResult env = run_cli("chsh-lhv --trials 500", "QPM_SEED=99");
    const CliResult flag = run_cli("chsh-lhv --trials 500 --seed 99");
    CHECK(env.out == flag.out);
  }
}

TEST_CASE("witness") {
  const CliResult r = run_cli("witness");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["violated"].get<bool>());
  CHECK(j["margin"].get<double>() ==
        doctest::Approx(2.0 * std::sqrt(2.0) - 2.0).epsilon(1e-9));

  const CliResult human = run_cli("witness --format human");
  CHECK(human.out.find("violated: yes") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("chsh-quantum --format yaml").exit_code == 2);
}
