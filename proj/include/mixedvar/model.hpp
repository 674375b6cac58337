#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace mixedvar {

// Parameters of the mixed model M_t = a * B^H_t + b * W_t on [0, T].
struct ModelParams {
  double H = 0.5;
  double a = 1.0;
  double b = 1.0;
  double T = 1.0;

  // Throws ParameterError unless 0 < H < 1, a > 0, b > 0, T > 0.  Degenerate
  // scales (a = 0 or b = 0) are permitted where a caller explicitly allows
  // them; see validate(bool).
  void validate(bool allow_zero_scale = false) const;
};

// Values of a process on the uniform grid {i*T/n : i = 0..n}.
struct GridPath {
  std::size_t n = 0;        // number of steps; values has n+1 entries
  double T = 1.0;           // horizon
  std::vector<double> values;

  double dt() const { return T / static_cast<double>(n); }
  void validate() const;  // length n+1, values[0] == 0, all finite
};

// Keep every `factor`-th point; factor must divide n.
GridPath subsample(const GridPath& path, std::size_t factor);

std::vector<double> increments(const GridPath& path);

// CSV with header "index,t,value", one row per grid point, 17 significant
// digits.  read_path_csv reports parse failures with their line number.
void write_path_csv(const GridPath& path, const std::filesystem::path& file);
GridPath read_path_csv(const std::filesystem::path& file);

}  // namespace mixedvar
