#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk {

/// Uniform grid on the truncated mass half-line [0, x_max]; node 0 is the
/// inner wall and node n-1 the far-field truncation.
class RadialGrid {
 public:
  RadialGrid(std::size_t n, double x_max) : n_(n), x_max_(x_max) {
    if (n < 3) throw std::domain_error("RadialGrid: need at least 3 nodes");
    if (!(x_max > 0.0)) throw std::domain_error("RadialGrid: x_max must be positive");
  }

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] double x_max() const { return x_max_; }
  [[nodiscard]] double dx() const { return x_max_ / static_cast<double>(n_ - 1); }
  [[nodiscard]] double x(std::size_t i) const { return static_cast<double>(i) * dx(); }

 private:
  std::size_t n_;
  double x_max_;
};

/// Specific volume and velocity at the mass-grid nodes, with the radius
/// reconstructed from v cached alongside.
struct State {
  double t = 0.0;
  std::vector<double> v;
  std::vector<double> u;
  std::vector<double> r;
};

inline void require_matching(const RadialGrid& grid, std::size_t size, const char* what) {
  if (size != grid.n())
    throw std::invalid_argument(std::string(what) + ": field length " + std::to_string(size) +
                                " does not match grid size " + std::to_string(grid.n()));
}

}  // namespace nsk
