#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "beamflat/genfun.hpp"
#include "beamflat/gevrey.hpp"
#include "beamflat/model.hpp"

namespace beamflat::io {

using nlohmann::json;

BeamParams params_from_json(const json& j);
json to_json(const BeamParams& p);
BeamParams load_params(const std::string& path);

TrajectoryGen trajectory_from_json(const json& j);
json to_json(const TrajectoryGen& y);
TrajectoryGen load_trajectory(const std::string& path);

json to_json(const GenTable& table);

/// 17 significant digits, scientific.
std::string fmt(double v);

/// BeamState CSV: "alpha,beta" header and value line, then "x,u,v" rows.
void write_state(std::ostream& os, const BeamState& z);
BeamState read_state(std::istream& is);
void save_state(const std::string& path, const BeamState& z);
BeamState load_state(const std::string& path);

/// CSV with a header row and numeric columns.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
};
Table read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

}  // namespace beamflat::io
