#pragma once

// Trajectory CSV. Scalar runs:
//   n,x,xbar,bet,capital,log_capital,stat
// Vector runs of dimension m:
//   n,x_1..x_m,xbar_1..xbar_m,xbar_norm,bet_1..bet_m,capital,log_capital,stat
// Numbers use %.17g so a read-back is exact; stat is empty for n < 3.

#include "gtp/play.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace gtp {

std::string format_double(double v);

std::string trajectory_csv_header(std::size_t dim);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Parses a file produced by write_trajectory_csv. Strategy and Reality
/// are not stored in the file and come back default-constructed.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace gtp
