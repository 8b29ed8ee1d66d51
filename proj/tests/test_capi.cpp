// Exercises the shared-library surface the same way an external client would:
// through mdpsim.h only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "mdpsim.h"

namespace fs = std::filesystem;

namespace {

const double kStates[] = {1.0, 2.0};
const double kGenerator[] = {-1.0, 1.0, 1.0, -1.0};
const double kObservable[] = {1.0, 0.0};

}  // namespace

TEST_CASE("chain lifecycle, stationary law and coefficients") {
  mdpsim_chain* chain = nullptr;
  REQUIRE(mdpsim_chain_create(kStates, kGenerator, kObservable, 2, &chain) == MDPSIM_OK);

  double pi[2] = {0, 0};
  CHECK(mdpsim_chain_stationary(chain, pi) == MDPSIM_OK);
  CHECK(std::abs(pi[0] - 0.5) < 1e-12);

  double b = 0, a = 0;
  CHECK(mdpsim_chain_homogenize(chain, &b, &a) == MDPSIM_OK);
  CHECK(std::abs(b - 0.8) < 1e-12);
  CHECK(std::abs(a - 1.6) < 1e-12);

  const double f[] = {1.0, -1.0};
  double h[2], qv[2], jump = 0;
  CHECK(mdpsim_chain_poisson(chain, f, h, &jump, qv) == MDPSIM_OK);
  CHECK(std::abs(h[0] + 0.5) < 1e-12);
  CHECK(std::abs(h[1] - 0.5) < 1e-12);
  CHECK(std::abs(jump - 1.0) < 1e-12);
  CHECK(std::abs(qv[0] - 1.0) < 1e-12);

  mdpsim_chain_destroy(chain);
}

TEST_CASE("error codes and messages") {
  mdpsim_chain* chain = nullptr;
  const double bad_gen[] = {-1.0, 0.5, 1.0, -1.0};  // row 0 does not sum to 0
  CHECK(mdpsim_chain_create(kStates, bad_gen, kObservable, 2, &chain) ==
        MDPSIM_ERR_INVALID_GENERATOR);
  CHECK(chain == nullptr);
  CHECK(std::strlen(mdpsim_last_error()) > 0);

  const double absorbing[] = {-1.0, 1.0, 0.0, 0.0};
  CHECK(mdpsim_chain_create(kStates, absorbing, kObservable, 2, &chain) ==
        MDPSIM_ERR_NOT_ERGODIC);

  double out = 0;
  CHECK(mdpsim_bound_continuous(-1.0, 1.0, &out) == MDPSIM_ERR_INVALID_QUERY);
  CHECK(mdpsim_chain_create(nullptr, kGenerator, kObservable, 2, &chain) ==
        MDPSIM_ERR_INVALID_ARGUMENT);

  CHECK(mdpsim_status_exit_code(MDPSIM_OK) == 0);
  CHECK(mdpsim_status_exit_code(MDPSIM_ERR_CONFIG) == 2);
  CHECK(mdpsim_status_exit_code(MDPSIM_ERR_STAT_CHECK) == 3);
}

TEST_CASE("environment realization handle") {
  mdpsim_chain* chain = nullptr;
  REQUIRE(mdpsim_chain_create(kStates, kGenerator, kObservable, 2, &chain) == MDPSIM_OK);
  mdpsim_env_path* path = nullptr;
  REQUIRE(mdpsim_env_realize(chain, 2024, &path) == MDPSIM_OK);

  int state = -1;
  double sigma = 0, b = 0;
  for (double u : {-25.0, -1.0, 0.0, 3.5, 40.0}) {
    CHECK(mdpsim_env_eval(path, u, &state, &sigma, &b) == MDPSIM_OK);
    CHECK((state == 0 || state == 1));
    CHECK(sigma == kStates[state]);
    CHECK(b == kObservable[state]);
  }

  // same seed reproduces the same states
  mdpsim_env_path* again = nullptr;
  REQUIRE(mdpsim_env_realize(chain, 2024, &again) == MDPSIM_OK);
  for (double u = -10.0; u <= 10.0; u += 0.37) {
    int s1 = -1, s2 = -2;
    mdpsim_env_eval(path, u, &s1, nullptr, nullptr);
    mdpsim_env_eval(again, u, &s2, nullptr, nullptr);
    CHECK(s1 == s2);
  }
  mdpsim_env_path_destroy(path);
  mdpsim_env_path_destroy(again);
  mdpsim_chain_destroy(chain);
}

TEST_CASE("bounds and rate helpers") {
  double out = 0;
  CHECK(mdpsim_bound_continuous(3.0, 1.0, &out) == MDPSIM_OK);
  CHECK(std::abs(out - 2.0 * std::exp(-4.5)) < 1e-15);
  CHECK(mdpsim_bound_jump(4.0, 1.0, 1.0, &out) == MDPSIM_OK);
  CHECK(std::abs(out - 2.0 * std::exp(-1.6)) < 1e-15);

  const double t[] = {0.0, 1.0};
  const double u[] = {0.0, 1.2};
  CHECK(mdpsim_rate_j(t, u, 2, 0.0, 0.8, 1.6, &out) == MDPSIM_OK);
  CHECK(std::abs(out - 0.05) < 1e-13);
  CHECK(mdpsim_rate_j(t, u, 2, 0.5, 0.8, 1.6, &out) == MDPSIM_ERR_INVALID_PATH);

  CHECK(mdpsim_tube_exit_rate(1.0, 1.0, 1.6, &out) == MDPSIM_OK);
  CHECK(std::abs(out - 0.3125) < 1e-14);
}

TEST_CASE("run() drives a full subcommand through the C surface") {
  const auto dir = fs::temp_directory_path() / "mdpsim_capi_test";
  fs::create_directories(dir);
  const auto cfg_path = dir / "cfg.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({
      "seed": 3,
      "environment": {"kind": "chain", "states": [1, 2],
                      "generator": [[-1, 1], [1, -1]], "observable": [1, 0]}
    })";
  }
  const auto out_dir = (dir / "out").string();
  CHECK(mdpsim_run("homogenize", cfg_path.string().c_str(), out_dir.c_str(), -1, 0) ==
        MDPSIM_OK);
  CHECK(fs::exists(dir / "out" / "homogenize.csv"));

  CHECK(mdpsim_run("no-such-command", cfg_path.string().c_str(), nullptr, -1, 0) ==
        MDPSIM_ERR_CONFIG);
  CHECK(mdpsim_run("homogenize", "/nonexistent.json", nullptr, -1, 0) == MDPSIM_ERR_IO);
  fs::remove_all(dir);
}

TEST_CASE("version string is present") {
  CHECK(std::string(mdpsim_version()).find('.') != std::string::npos);
}
