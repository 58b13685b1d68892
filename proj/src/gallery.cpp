#include "numrad/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace numrad {

namespace {

void require_n(int n, int least, const char* family) {
  if (n < least)
    throw InputError(std::string(family) + " needs n >= " + std::to_string(least) + " (got " +
                     std::to_string(n) + ")");
}

double param(const GallerySpec& s, const std::string& key, double fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

}  // namespace

ComplexMatrix crabb(int n) {
  require_n(n, 2, "crabb");
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  if (n == 2) {
    k(0, 1) = 2.0;
    return k;
  }
  for (int i = 0; i + 1 < n; ++i) k(i, i + 1) = 1.0;
  k(0, 1) = std::numbers::sqrt2;
  k(n - 2, n - 1) = std::numbers::sqrt2;
  return k;
}

ComplexMatrix disk_model(int n, double s, double r_tilde) {
  if (!(s >= 0.0) || !(r_tilde > 0.0) || !std::isfinite(s) || !std::isfinite(r_tilde))
    throw InputError("disk_model needs s >= 0 and r_tilde > 0");
  ComplexMatrix m = r_tilde * crabb(n);
  m.diagonal().array() += s;
  return m;
}

ComplexMatrix nearly_disk(int n, double mu, double phase) {
  if (!(mu > 0.0 && mu <= 1.0)) throw InputError("nearly_disk needs mu in (0, 1]");
  return std::polar(1.0, phase) * disk_model(n, 1.0 - mu, mu);
}

ComplexMatrix t_mu(int n, double mu, std::uint64_t seed) {
  require_n(n, 2, "t_mu");
  if (!(mu > 0.0 && mu <= 1.0)) throw InputError("t_mu needs mu in (0, 1]");
  const int k = std::min(100, n / 4);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> modulus(0.90, 0.99);

  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  const double rot = angle(rng);
  if (n - k >= 2) {
    t.topLeftCorner(n - k, n - k) = disk_model(n - k, 1.0 - mu, mu);
  } else {
    t(0, 0) = 1.0;
  }
  for (int i = n - k; i < n; ++i) {
    const double m = modulus(rng);
    t(i, i) = std::polar(m, angle(rng));
  }
  return std::polar(1.0, rot) * t;
}

ComplexMatrix grcar(int n, int k) {
  require_n(n, 1, "grcar");
  if (k < 0) throw InputError("grcar needs k >= 0");
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) g(i, i - 1) = -1.0;
    for (int d = 0; d <= k && i + d < n; ++d) g(i, i + d) = 1.0;
  }
  return g;
}

ComplexMatrix gear(int n, int i, int j) {
  require_n(n, 2, "gear");
  if (i == 0) i = n;
  if (j == 0) j = -n;
  if (std::abs(i) > n || std::abs(j) > n) throw InputError("gear needs |i|, |j| <= n");
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  for (int r = 0; r + 1 < n; ++r) {
    g(r, r + 1) = 1.0;
    g(r + 1, r) = 1.0;
  }
  g(0, std::abs(i) - 1) = i > 0 ? 1.0 : -1.0;
  g(n - 1, n - std::abs(j)) = j > 0 ? 1.0 : -1.0;
  return g;
}

ComplexMatrix random_complex(int n, std::uint64_t seed) {
  require_n(n, 1, "random_complex");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexMatrix a(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = nd(rng);
      a(r, c) = Complex(re, nd(rng));
    }
  return a;
}

ComplexMatrix jordan_edge() {
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  a(0, 1) = 1.0;
  a(2, 2) = 1.0;
  a(2, 3) = 1.0;
  a(3, 3) = 1.0;
  return a;
}

std::vector<std::string> gallery_families() {
  return {"crabb", "disk_model", "nearly_disk", "t_mu", "grcar", "gear", "random_complex",
          "jordan_edge"};
}

ComplexMatrix make_gallery(const GallerySpec& s) {
  const std::string& f = s.family;
  if (f == "crabb") return crabb(s.n);
  if (f == "disk_model") return disk_model(s.n, param(s, "s", 0.3), param(s, "r_tilde", 0.7));
  if (f == "nearly_disk")
    return nearly_disk(s.n, param(s, "mu", 0.9999), param(s, "phase", 0.25 * std::numbers::pi));
  if (f == "t_mu") return t_mu(s.n, param(s, "mu", 0.5), s.seed);
  if (f == "grcar") return grcar(s.n, static_cast<int>(param(s, "k", 3)));
  if (f == "gear")
    return gear(s.n, static_cast<int>(param(s, "i", 0)), static_cast<int>(param(s, "j", 0)));
  if (f == "random_complex") return random_complex(s.n, s.seed);
  if (f == "jordan_edge") return jordan_edge();
  throw InputError("unknown gallery family: " + f);
}

}  // namespace numrad
