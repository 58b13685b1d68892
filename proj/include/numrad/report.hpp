#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace numrad {

/// One cutting-plane iteration.
struct CutRecord {
  int iter = 0;
  std::string kind;                ///< "uhlig" or "optimal"
  double theta_cut = 0.0;
  std::optional<double> mu_est;    ///< from this iteration's optimal-cut attempt
  std::optional<std::string> reason;  ///< why an optimal cut was not used
  double l = 0.0;
  double u = 0.0;
  double eps = 0.0;
};

/// One outer iteration of the level-set method.
struct LevelSetRecord {
  int iter = 0;
  double gamma = 0.0;       ///< inflated level used for the pencil
  double theta_star = 0.0;  ///< maximizer angle before inflation
  int angles = 0;           ///< unimodular angles found (after the safeguard)
  int candidates = 0;       ///< midpoints kept for the next iteration
  bool safeguard = false;   ///< theta_star had to be added by hand
  bool singular = false;
};

struct RegionEstimate {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double corner_modulus = 0.0;
  double mu_eff = 1.0;
  int predicted_cuts = 0;
};

struct SwitchDecision {
  bool continue_cutting = true;
  double predicted_cut_cost = 0.0;
  double predicted_levelset_cost = 0.0;
  std::vector<RegionEstimate> per_region;
};

struct SwitchEvent {
  int after_cut = 0;
  double l = 0.0;
  double u = 0.0;
  std::vector<double> seeds;
  SwitchDecision decision;
};

struct SolveReport {
  std::string method;
  double r = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double rel_err = 0.0;
  long eigH_count = 0;
  long pencil_count = 0;
  double tol = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<std::string> flags;
  std::optional<std::vector<CutRecord>> cuts;
  std::optional<std::vector<LevelSetRecord>> levelset;
  std::optional<SwitchEvent> switch_event;

  bool has_flag(const std::string& f) const;
};

/// A solver gave up (iteration or cut budget); the partial report is attached.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Canonical JSON serialization of a report.
std::string to_json(const SolveReport& rep, int indent = 2);
SolveReport report_from_json(const std::string& text);

/// Plot-ready trace: iter,kind,theta_cut,mu_est,l,u,eps. Level-set iterations
/// appear with kind "levelset", theta_cut = theta_star and u = gamma.
void write_trace_csv(const SolveReport& rep, std::ostream& out);

}  // namespace numrad
