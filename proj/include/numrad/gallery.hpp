#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "numrad/linalg.hpp"

namespace numrad {

/// Crabb matrix: superdiagonal (sqrt 2, 1, ..., 1, sqrt 2); K_2 = [[0, 2], [0, 0]].
/// W(K_n) is the unit disk.
ComplexMatrix crabb(int n);

/// s I + r_tilde K_n: a disk of radius r_tilde centred at s.
ComplexMatrix disk_model(int n, double s, double r_tilde);

/// e^{i phase} ((1 - mu) I + mu K_n); r = 1 for every mu.
ComplexMatrix nearly_disk(int n, double mu, double phase = std::numbers::pi / 4.0);

/// e^{i theta} blkdiag(M, D) with M = disk_model(n - k, 1 - mu, mu),
/// k = min(100, n / 4), D diagonal with moduli uniform in [0.90, 0.99) and
/// uniform arguments, theta uniform in [0, 2 pi). r = 1.
ComplexMatrix t_mu(int n, double mu, std::uint64_t seed);

/// -1 on the subdiagonal, 1 on the diagonal and the first k superdiagonals.
ComplexMatrix grcar(int n, int k = 3);

/// 1 on the sub- and superdiagonal, sign(i) at (1, |i|), sign(j) at (n, n + 1 - |j|)
/// (1-based). i = 0 / j = 0 select the defaults n / -n.
ComplexMatrix gear(int n, int i = 0, int j = 0);

/// Independent standard normal real and imaginary parts.
ComplexMatrix random_complex(int n, std::uint64_t seed);

/// blkdiag(J, J + I) with J the 2x2 Jordan block.
ComplexMatrix jordan_edge();

/// Generic front end used by the CLI and bindings.
struct GallerySpec {
  std::string family;
  int n = 0;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
};

ComplexMatrix make_gallery(const GallerySpec& spec);

/// Family names accepted by make_gallery().
std::vector<std::string> gallery_families();

}  // namespace numrad
