#pragma once

#include <string>
#include <vector>

#include "fgeo/models.hpp"
#include "fgeo/ode.hpp"
#include "fgeo/types.hpp"

namespace fgeo {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// `t,level,x_0..x_{n-1},y_0..y_{n-1}` rows, LF endings, header always present.
/// Velocity columns are omitted when the trajectory has no velocities.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// `t,j,i,residual` rows for tower consistency reports.
void write_residuals_csv(const std::string& path,
                         const std::vector<LevelResidual>& residuals);

/// Mode coefficients plus an energy column per time step.
void write_spectral_csv(const std::string& path, const std::vector<double>& times,
                        const std::vector<SpectralState>& states, int energy_k);

/// `key = value` summary lines.
void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace fgeo
