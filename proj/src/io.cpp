#include "warpharm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "warpharm/error.hpp"

namespace warpharm::io {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<std::vector<double>> read_csv(const fs::path& path, const std::vector<std::string>& header) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || split(line) != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorCode::InvalidInput, path.string() + ": expected header `" + want + "`");
  }
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw Error(ErrorCode::InvalidInput, path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size() || c.empty())
        throw Error(ErrorCode::InvalidInput, path.string() + ":" + std::to_string(lineno) + ": bad number `" + c + "`");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WarpingFunction read_tabulated_csv(const fs::path& path, GrowthClass growth) {
  const auto rows = read_csv(path, {"r", "phi", "dphi", "ddphi"});
  std::vector<double> r, p, d, dd;
  for (const auto& row : rows) {
    r.push_back(row[0]);
    p.push_back(row[1]);
    d.push_back(row[2]);
    dd.push_back(row[3]);
  }
  return WarpingFunction::tabulated(r, p, d, dd, growth);
}

BoundaryData read_boundary_csv(const fs::path& path, int n, int band_limit) {
  if (n == 2) {
    const auto rows = read_csv(path, {"theta", "f"});
    SphereGrid g = circle_grid(static_cast<int>(rows.size()));
    std::vector<double> f;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::abs(rows[i][0] - g.nodes[i].theta) > 1e-9)
        throw Error(ErrorCode::InvalidInput, path.string() + ": theta column must be equiangular from 0");
      f.push_back(rows[i][1]);
    }
    return BoundaryData::from_samples(std::move(g), std::move(f), band_limit);
  }
  if (n == 3) {
    const auto rows = read_csv(path, {"colat", "lon", "f"});
    int n_lon = 0;
    while (n_lon < static_cast<int>(rows.size()) && rows[n_lon][0] == rows[0][0]) ++n_lon;
    if (n_lon == 0 || rows.size() % n_lon != 0)
      throw Error(ErrorCode::InvalidInput, path.string() + ": rows do not form a colatitude x longitude grid");
    SphereGrid g = sphere_grid(static_cast<int>(rows.size()) / n_lon, n_lon);
    std::vector<double> f;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::abs(rows[i][0] - g.nodes[i].theta) > 1e-9 || std::abs(rows[i][1] - g.nodes[i].lon) > 1e-9)
        throw Error(ErrorCode::InvalidInput, path.string() + ": node " + std::to_string(i) +
                                                 " is off the Gauss-Legendre x uniform grid");
      f.push_back(rows[i][2]);
    }
    return BoundaryData::from_samples(std::move(g), std::move(f), band_limit);
  }
  throw Error(ErrorCode::UnsupportedDimension, "boundary samples need n in {2, 3}");
}

Json coefficients_json(const CoefficientTable& coeffs) {
  Json arr = Json::array();
  for (int m = 0; m <= coeffs.max_degree(); ++m)
    for (int k = 0; k < coeffs.multiplicity(m); ++k) arr.push_back({{"m", m}, {"k", k}, {"c", number(coeffs.at(m, k))}});
  return arr;
}

CoefficientTable coefficients_from_json(const Json& j, int n) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "coefficients must be a JSON array of {m, k, c}");
  int top = 0;
  for (const auto& e : j) top = std::max(top, e.at("m").get<int>());
  CoefficientTable t(n, top);
  for (const auto& e : j) t.at(e.at("m").get<int>(), e.at("k").get<int>()) = e.at("c").get<double>();
  return t;
}

Json report_json(const CriterionReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"value", number(r.value)},
          {"error_bound", number(r.error_bound)},
          {"r_max", number(r.r_max)},
          {"tail_evidence", r.tail_evidence}};
}

std::string profile_csv(const RadialProfile& p) {
  std::string out = "r,phi_m,dphi_m\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    out += format_number(p.grid[i]) + "," + format_number(p.values[i]) + "," + format_number(p.derivs[i]) + "\n";
  return out;
}

Json profile_meta_json(const RadialProfile& p) {
  Json j = {{"m", p.mode.m}, {"lambda_sq", number(p.mode.lambda_sq)}, {"l", number(p.l)}};
  if (p.limit_estimate)
    j["limit_estimate"] = number(*p.limit_estimate);
  else
    j["limit_estimate"] = "Unbounded";
  j["limit_error"] = number(p.limit_error);
  j["normalized"] = p.normalized;
  return j;
}

RadialProfile read_profile(const fs::path& csv, const fs::path& meta, const WarpingFunction& w, int n) {
  const Json j = Json::parse(read_file(meta));
  RadialProfile p;
  p.n = n;
  p.mode = eigen_round_sphere(n, j.at("m").get<int>());
  p.l = j.at("l").get<double>();
  if (j.at("limit_estimate").is_number()) p.limit_estimate = j.at("limit_estimate").get<double>();
  p.limit_error = j.at("limit_error").is_number() ? j.at("limit_error").get<double>() : 0.0;
  p.normalized = j.value("normalized", false);
  for (const auto& row : read_csv(csv, {"r", "phi_m", "dphi_m"})) {
    p.grid.push_back(row[0]);
    p.values.push_back(row[1]);
    p.derivs.push_back(row[2]);
    const WarpValues v = w.eval(row[0]);
    p.second.push_back(p.mode.lambda_sq * row[1] / (v.phi * v.phi) - (n - 1.0) * (v.dphi / v.phi) * row[2]);
  }
  if (p.grid.size() < 2) throw Error(ErrorCode::InvalidInput, csv.string() + ": profile needs two or more rows");
  return p;
}

std::string annulus_csv(const AnnulusGrid& g, const std::vector<double>& u) {
  std::string out = "r,theta,u\n";
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      out += format_number(g.r(i)) + "," + format_number(g.theta(j)) + "," + format_number(u[g.index(i, j)]) + "\n";
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace warpharm::io
