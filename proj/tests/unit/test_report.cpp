#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

using namespace numrad;

namespace {

SolveReport sample_report() {
  SolveReport rep;
  rep.method = "hybrid";
  rep.r = 1.25;
  rep.lower = 1.25;
  rep.upper = 1.5;
  rep.rel_err = 0.2;
  rep.eigH_count = 7;
  rep.pencil_count = 1;
  rep.tol = 1e-14;
  rep.wall_seconds = 0.5;
  rep.converged = true;
  rep.flags = {"calibrated", "switched"};
  rep.cuts = std::vector<CutRecord>{
      {1, "uhlig", 0.75, std::nullopt, std::string("fit"), 1.0, 2.0, 1.0},
      {2, "optimal", 0.5, 0.25, std::nullopt, 1.25, 1.5, 0.2}};
  rep.levelset = std::vector<LevelSetRecord>{{1, 1.25, 0.125, 2, 0, false, false}};
  SwitchDecision d;
  d.continue_cutting = false;
  d.predicted_cut_cost = 0.75;
  d.predicted_levelset_cost = 0.5;
  d.per_region.push_back({0.25, 0.5, 1.5, 0.5, 3});
  rep.switch_event = SwitchEvent{2, 1.25, 1.5, {0.5, 1.0}, d};
  return rep;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("report JSON matches the golden file") {
  std::string golden = read_file(NUMRAD_GOLDEN_DIR "/report.json");
  while (!golden.empty() && golden.back() == '\n') golden.pop_back();
  CHECK(to_json(sample_report()) == golden);
}

TEST_CASE("report JSON round trip") {
  const SolveReport rep = sample_report();
  const SolveReport back = report_from_json(to_json(rep));
  CHECK(to_json(back) == to_json(rep));
  CHECK(back.cuts->at(1).mu_est == 0.25);
  CHECK_FALSE(back.cuts->at(0).mu_est.has_value());
  CHECK(back.switch_event->decision.per_region.at(0).predicted_cuts == 3);
}

TEST_CASE("unbounded values serialize as null") {
  SolveReport rep;
  rep.method = "cutting";
  rep.upper = std::numeric_limits<double>::infinity();
  rep.rel_err = std::numeric_limits<double>::infinity();
  const auto j = nlohmann::json::parse(to_json(rep));
  CHECK(j.at("upper").is_null());
  CHECK(j.at("cuts").is_null());
  CHECK(j.at("switch_event").is_null());
  CHECK(std::isinf(report_from_json(to_json(rep)).upper));
}

TEST_CASE("solver reports carry the golden key set") {
  const auto golden = nlohmann::json::parse(read_file(NUMRAD_GOLDEN_DIR "/report.json"));
  const ComplexMatrix a = random_complex(8, 1);
  HybridOptions ho;
  ho.model = CostModel{8, 1e-4, 1e-3};
  for (const SolveReport& rep : {algorithm1(a), algorithm2(a), hybrid_solve(a, ho)}) {
    const auto j = nlohmann::json::parse(to_json(rep));
    for (auto it = golden.begin(); it != golden.end(); ++it) CHECK(j.contains(it.key()));
    CHECK(j.size() == golden.size());
  }
}

TEST_CASE("trace CSV") {
  std::ostringstream out;
  write_trace_csv(sample_report(), out);
  const std::string s = out.str();
  CHECK(s.rfind("iter,kind,theta_cut,mu_est,l,u,eps\n", 0) == 0);
  CHECK(s.find("\n1,uhlig,0.75,,1,2,1\n") != std::string::npos);
  CHECK(s.find("\n2,optimal,0.5,0.25,") != std::string::npos);
  CHECK(s.find("\n1,levelset,0.125,,") != std::string::npos);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}
