#include "fgeo/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace fgeo {

std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}
}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  const int dim = traj.pos.empty() ? 0 : static_cast<int>(traj.pos[0].size());
  const bool with_vel = !traj.vel.empty();
  out << "t,level";
  for (int i = 0; i < dim; ++i) out << ",x_" << i;
  if (with_vel)
    for (int i = 0; i < dim; ++i) out << ",y_" << i;
  out << "\n";
  for (size_t s = 0; s < traj.times.size(); ++s) {
    out << format_double(traj.times[s]) << ',' << traj.level;
    for (int i = 0; i < dim; ++i) out << ',' << format_double(traj.pos[s][i]);
    if (with_vel)
      for (int i = 0; i < dim; ++i) out << ',' << format_double(traj.vel[s][i]);
    out << "\n";
  }
}

void write_residuals_csv(const std::string& path,
                         const std::vector<LevelResidual>& residuals) {
  std::ofstream out = open_out(path);
  out << "t,j,i,residual\n";
  for (const LevelResidual& r : residuals)
    out << format_double(r.t) << ',' << r.j << ',' << r.i << ','
        << format_double(r.value) << "\n";
}

void write_spectral_csv(const std::string& path, const std::vector<double>& times,
                        const std::vector<SpectralState>& states, int energy_k) {
  std::ofstream out = open_out(path);
  const int n = states.empty() ? 0 : states[0].modes;
  out << "t,a_0";
  for (int m = 1; m <= n; ++m) out << ",a_" << m << ",b_" << m;
  out << ",energy\n";
  for (size_t s = 0; s < times.size(); ++s) {
    out << format_double(times[s]);
    for (int i = 0; i < 2 * n + 1; ++i)
      out << ',' << format_double(states[s].coeffs[i]);
    out << ',' << format_double(ch_energy(states[s], energy_k)) << "\n";
  }
}

void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
}

}  // namespace fgeo
