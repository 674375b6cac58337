#include "mixedvar/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mixedvar/errors.hpp"

namespace mixedvar {

void ModelParams::validate(bool allow_zero_scale) const {
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("H must lie in (0,1), got " + std::to_string(H));
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0 ||
      (!allow_zero_scale && (a == 0.0 || b == 0.0)))
    throw ParameterError(allow_zero_scale ? "scales must be nonnegative"
                                          : "scales must be positive");
  if (!(T > 0.0)) throw ParameterError("T must be positive");
}

void GridPath::validate() const {
  if (n == 0 || values.size() != n + 1)
    throw ParameterError("GridPath: values must have n+1 entries");
  if (values[0] != 0.0) throw ParameterError("GridPath: values[0] must be 0");
  if (!(T > 0.0)) throw ParameterError("GridPath: T must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("GridPath: non-finite value");
}

GridPath subsample(const GridPath& path, std::size_t factor) {
  if (factor == 0 || path.n % factor != 0)
    throw ParameterError("subsample: factor must divide n");
  GridPath out;
  out.n = path.n / factor;
  out.T = path.T;
  out.values.resize(out.n + 1);
  for (std::size_t i = 0; i <= out.n; ++i)
    out.values[i] = path.values[i * factor];
  return out;
}

std::vector<double> increments(const GridPath& path) {
  std::vector<double> d(path.n);
  for (std::size_t i = 0; i < path.n; ++i)
    d[i] = path.values[i + 1] - path.values[i];
  return d;
}

namespace {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_path_csv(const GridPath& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << "index,t,value\n";
  const double dt = path.dt();
  for (std::size_t i = 0; i <= path.n; ++i) {
    out << i << ',' << format_g17(static_cast<double>(i) * dt) << ','
        << format_g17(path.values[i]) << '\n';
  }
  if (!out) throw IoError("write failed: " + file.string());
}

GridPath read_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open for reading: " + file.string());
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw IoError(file.string() + ": empty file");
  ++lineno;
  if (line != "index,t,value")
    throw IoError(file.string() + ": line 1: expected header index,t,value");
  GridPath path;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f0, f1, f2;
    if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') ||
        !std::getline(row, f2))
      throw IoError(file.string() + ": line " + std::to_string(lineno) +
                    ": expected three comma-separated fields");
    try {
      std::size_t pos = 0;
      const unsigned long long idx = std::stoull(f0, &pos);
      if (pos != f0.size()) throw std::invalid_argument(f0);
      if (idx != path.values.size())
        throw IoError(file.string() + ": line " + std::to_string(lineno) +
                      ": index out of sequence");
      last_t = std::stod(f1, &pos);
      if (pos != f1.size()) throw std::invalid_argument(f1);
      const double v = std::stod(f2, &pos);
      if (pos != f2.size()) throw std::invalid_argument(f2);
      path.values.push_back(v);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw IoError(file.string() + ": line " + std::to_string(lineno) +
                    ": malformed number");
    }
  }
  if (path.values.size() < 2)
    throw IoError(file.string() + ": need at least two grid points");
  path.n = path.values.size() - 1;
  path.T = last_t;
  path.validate();
  return path;
}

}  // namespace mixedvar
