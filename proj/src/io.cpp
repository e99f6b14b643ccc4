#include "beamflat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "beamflat/error.hpp"

namespace beamflat::io {

namespace {

Profile profile_from_json(const json& j, double length) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "affine") return Profile::affine(j.at("a").get<double>(), j.value("b", 0.0));
  if (kind == "sampled") return Profile::sampled(j.at("samples").get<std::vector<double>>(), length);
  throw Error("config.profile", "unknown profile kind '" + kind + "'");
}

json profile_to_json(const Profile& p) {
  if (p.kind() == Profile::Kind::affine) return {{"kind", "affine"}, {"a", p.a()}, {"b", p.b()}};
  return {{"kind", "sampled"}, {"samples", p.samples()}};
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw Error("csv.parse", "not a number: '" + cell + "'");
    }
  }
  return out;
}

std::vector<std::string> split_names(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

}  // namespace

BeamParams params_from_json(const json& j) {
  try {
    BeamParams p;
    p.length = j.at("L").get<double>();
    p.tip_mass = j.at("m").get<double>();
    p.tip_inertia = j.at("J").get<double>();
    p.rho = profile_from_json(j.at("rho"), p.length);
    p.EI = profile_from_json(j.at("EI"), p.length);
    p.grid_n = j.value("grid_n", 2048);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw Error("config.params", std::string("malformed parameter file: ") + e.what());
  }
}

json to_json(const BeamParams& p) {
  return {{"L", p.length},           {"m", p.tip_mass},
          {"J", p.tip_inertia},      {"rho", profile_to_json(p.rho)},
          {"EI", profile_to_json(p.EI)}, {"grid_n", p.grid_n}};
}

BeamParams load_params(const std::string& path) { return params_from_json(read_json(path)); }

TrajectoryGen trajectory_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return TrajectoryGen::constant(j.at("c").get<double>());
    if (kind == "poly_exp")
      return TrajectoryGen::poly_exp(j.at("coeffs").get<std::vector<double>>(),
                                     j.value("rate", 0.0));
    if (kind == "sinusoid")
      return TrajectoryGen::sinusoid(j.at("amp").get<double>(), j.at("omega").get<double>(),
                                     j.value("phase", 0.0));
    if (kind == "sum") {
      std::vector<TrajectoryGen> terms;
      for (const auto& t : j.at("terms")) terms.push_back(trajectory_from_json(t));
      return TrajectoryGen::sum(std::move(terms));
    }
    throw Error("config.trajectory", "unknown trajectory kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error("config.trajectory", std::string("malformed trajectory: ") + e.what());
  }
}

json to_json(const TrajectoryGen& y) {
  switch (y.kind()) {
    case TrajectoryGen::Kind::constant:
      return {{"kind", "constant"}, {"c", y.c()}};
    case TrajectoryGen::Kind::poly_exp:
      return {{"kind", "poly_exp"}, {"coeffs", y.coeffs()}, {"rate", y.rate()}};
    case TrajectoryGen::Kind::sinusoid:
      return {{"kind", "sinusoid"}, {"amp", y.amp()}, {"omega", y.omega()}, {"phase", y.phase()}};
    case TrajectoryGen::Kind::sum: {
      json terms = json::array();
      for (const auto& t : y.terms()) terms.push_back(to_json(t));
      return {{"kind", "sum"}, {"terms", terms}};
    }
  }
  return {};
}

TrajectoryGen load_trajectory(const std::string& path) {
  return trajectory_from_json(read_json(path));
}

json to_json(const GenTable& t) {
  return {{"K", t.K()},       {"grid_n", t.grid_n()}, {"gL", t.gL()},
          {"gxL", t.gxL()},   {"hL", t.hL()},         {"hxL", t.hxL()},
          {"warnings", t.warnings()}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_state(std::ostream& os, const BeamState& z) {
  os << "alpha,beta\n" << fmt(z.alpha) << ',' << fmt(z.beta) << "\n" << "x,u,v\n";
  for (int i = 0; i <= z.u.intervals(); ++i)
    os << fmt(z.u.x(i)) << ',' << fmt(z.u[i]) << ',' << fmt(z.v[i]) << '\n';
}

BeamState read_state(std::istream& is) {
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(is, line)) throw Error("csv.state", std::string("missing ") + what);
    while (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next("alpha,beta header");
  if (split_names(line) != std::vector<std::string>{"alpha", "beta"})
    throw Error("csv.state", "first row must be 'alpha,beta'");
  next("alpha,beta values");
  const auto ab = split_numbers(line);
  if (ab.size() != 2) throw Error("csv.state", "expected two values for alpha,beta");
  next("x,u,v header");
  if (split_names(line) != std::vector<std::string>{"x", "u", "v"})
    throw Error("csv.state", "third row must be 'x,u,v'");
  std::vector<double> x, u, v;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto r = split_numbers(line);
    if (r.size() != 3) throw Error("csv.state", "state rows need three columns");
    x.push_back(r[0]);
    u.push_back(r[1]);
    v.push_back(r[2]);
  }
  if (x.size() < 3) throw Error("csv.state", "state needs at least three grid points");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - (x.front() + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(h) * x.size()))
      throw Error("csv.state", "state grid is not uniform");
  BeamState z;
  z.alpha = ab[0];
  z.beta = ab[1];
  z.u = GridFunction(x.front(), x.back(), std::move(u));
  z.v = GridFunction(x.front(), x.back(), std::move(v));
  return z;
}

void save_state(const std::string& path, const BeamState& z) {
  std::ofstream os(path);
  if (!os) throw Error("io.write", "cannot write '" + path + "'");
  write_state(os, z);
}

BeamState load_state(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("io.read", "cannot read '" + path + "'");
  return read_state(is);
}

std::vector<double> Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& r : rows) out.push_back(r.at(c));
      return out;
    }
  throw Error("csv.column", "missing column '" + name + "'");
}

Table read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("io.read", "cannot read '" + path + "'");
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw Error("csv.parse", "empty file '" + path + "'");
  t.header = split_names(line);
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    t.rows.push_back(split_numbers(line));
    if (t.rows.back().size() != t.header.size())
      throw Error("csv.parse", "row width does not match header in '" + path + "'");
  }
  return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream os(path);
  if (!os) throw Error("io.write", "cannot write '" + path + "'");
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << fmt(columns[c][i]);
    os << '\n';
  }
}

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("io.read", "cannot read '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error("io.json", "invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error("io.write", "cannot write '" + path + "'");
  os << j.dump(2) << '\n';
}

}  // namespace beamflat::io
