#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "sincmbe/grid.hpp"

namespace testutil {

inline sincmbe::RealField fill(sincmbe::GridSpec grid,
                               const std::function<double(double, double)>& f) {
  sincmbe::RealField out(grid);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      out(i, j) = f(grid.x(i), grid.y(j));
    }
  }
  return out;
}

inline double max_diff(const sincmbe::RealField& a,
                       const sincmbe::RealField& b) {
  double m = 0.0;
  for (int n = 0; n < a.size(); ++n) {
    m = std::max(m, std::abs(a.data()[n] - b.data()[n]));
  }
  return m;
}

// Band-limited random field: modes |k1|,|k2| <= kmax with O(1) amplitudes.
inline sincmbe::RealField random_smooth(sincmbe::GridSpec grid, int kmax,
                                        unsigned seed, double amplitude = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  sincmbe::RealField out(grid);
  for (int k1 = 0; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double a = coef(gen);
      const double b = coef(gen);
      for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
          const double phase = k1 * grid.x(i) + k2 * grid.y(j);
          out(i, j) += amplitude * (a * std::cos(phase) + b * std::sin(phase));
        }
      }
    }
  }
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    namespace fs = std::filesystem;
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("sincmbe_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& leaf = "") const {
    return leaf.empty() ? path_.string() : (path_ / leaf).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
