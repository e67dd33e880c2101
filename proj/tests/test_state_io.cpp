#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fockbench/errors.hpp"
#include "fockbench/state_io.hpp"
#include "test_support.hpp"

using namespace fockbench;

namespace {

std::filesystem::path tmp_path(const std::string& name) {
  std::filesystem::create_directories(FOCKBENCH_TEST_TMPDIR);
  return std::filesystem::path(FOCKBENCH_TEST_TMPDIR) / name;
}

}  // namespace

TEST_CASE("state JSON round-trips exactly") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = fockbench::testing::random_state(rng, 3 + trial * 4);
    const auto path = tmp_path("roundtrip.json");
    save_state(rho, path);
    const auto back = load_state(path);
    CHECK(back.matrix() == rho.matrix());
    CHECK(dump_state(back) == dump_state(rho));
  }
  const auto doc = state_to_json(DensityMatrix::vacuum(3));
  CHECK(doc["version"] == "fockbench-state-v1");
  CHECK(doc["dim"] == 3);
}

TEST_CASE("state JSON rejects bad documents") {
  auto doc = state_to_json(DensityMatrix::fock(1, 3));
  SUBCASE("version") {
    doc["version"] = "fockbench-state-v0";
    CHECK_THROWS_AS(state_from_json(doc), FormatError);
  }
  SUBCASE("shape") {
    doc["re"][1].erase(0);
    CHECK_THROWS_AS(state_from_json(doc), FormatError);
  }
  SUBCASE("dim") {
    doc["dim"] = 4;
    CHECK_THROWS_AS(state_from_json(doc), FormatError);
  }
  SUBCASE("entries") {
    doc["im"][0][0] = "zero";
    CHECK_THROWS_AS(state_from_json(doc), FormatError);
  }
  SUBCASE("corrupt file") {
    const auto path = tmp_path("corrupt.json");
    std::ofstream(path) << "{\"version\": \"fockbench-state-v1\", \"dim\": ";
    CHECK_THROWS_AS(load_state(path), FormatError);
  }
  CHECK_THROWS_AS(load_state(tmp_path("does_not_exist.json")), InvalidArgument);
}
