#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "numrad/cutting.hpp"
#include "numrad/levelset.hpp"

namespace numrad {

/// Measured kernel costs for matrices of order n.
struct CostModel {
  long n = 0;
  double t_eigH = 0.0;    ///< seconds per Hermitian eig of order n
  double t_pencil = 0.0;  ///< seconds per generalized eig of order 2n
};

/// Times both kernels on random order-n inputs; trimmed means over `samples`.
/// The timed calls go through the kernel counters like any other.
CostModel calibrate(long n, int samples = 3, std::uint64_t seed = 1);

/// {"n": .., "t_eigH_sec": .., "t_pencil_sec": ..}
std::string cost_model_to_json(const CostModel& m);
CostModel cost_model_from_json(const std::string& text);
CostModel load_cost_model(const std::string& path);
void save_cost_model(const CostModel& m, const std::string& path);

struct LevelSetCostWeights {
  double pencil = 1.5;
  double eig = 10.0;
};

/// Predicted cost of finishing by cutting vs switching to the level-set method.
/// Corners with modulus above l (1 + tol) are regions; the two next to the
/// point attaining l use `mu_est`, others a chord estimate of the curvature.
SwitchDecision estimate_remaining(const BoundaryPolygon& g, std::size_t best_index,
                                  std::optional<double> mu_est, bool optimal_active,
                                  const CostModel& model, double tol,
                                  const LevelSetCostWeights& w = {});

/// Cuts needed at a given per-cut contraction rate of the modulus error.
int cuts_at_rate(double beta, double rate, double tol);

struct HybridOptions {
  double tol = 1e-14;
  CuttingOptions cutting;    ///< tol is overridden by `tol`
  LevelSetOptions levelset;  ///< tol, seeds and gamma_floor are set on switch
  std::optional<CostModel> model;  ///< calibrated for n when absent
  LevelSetCostWeights weights;
};

/// Cutting-plane iteration that hands over to a warm-started level-set
/// iteration once cutting is predicted to be the slower way to finish.
SolveReport hybrid_solve(const ComplexMatrix& a, const HybridOptions& opts = {});

}  // namespace numrad
