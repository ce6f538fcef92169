#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpharm/criterion.hpp"
#include "warpharm/extension.hpp"
#include "warpharm/oracle.hpp"
#include "warpharm/radial.hpp"
#include "warpharm/spectrum.hpp"
#include "warpharm/warp.hpp"

namespace warpharm::io {

using Json = nlohmann::ordered_json;

// Twelve significant digits, the fixed precision of every report.
std::string format_number(double v);
// v rounded to twelve significant digits; non-finite values map to null.
Json number(double v);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Rows of a comma separated file with the given header.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, const std::vector<std::string>& header);

WarpingFunction read_tabulated_csv(const std::filesystem::path& path, GrowthClass growth = GrowthClass::unknown());

// n = 2: `theta,f` on an equiangular circle; n = 3: `colat,lon,f` on the
// Gauss-Legendre x uniform grid, colatitude-major.
BoundaryData read_boundary_csv(const std::filesystem::path& path, int n, int band_limit);

Json coefficients_json(const CoefficientTable& coeffs);
CoefficientTable coefficients_from_json(const Json& j, int n);

Json report_json(const CriterionReport& report);

std::string profile_csv(const RadialProfile& profile);
Json profile_meta_json(const RadialProfile& profile);
// Inverse of profile_csv + profile_meta_json; y'' is rebuilt from the ODE.
RadialProfile read_profile(const std::filesystem::path& csv, const std::filesystem::path& meta,
                           const WarpingFunction& w, int n);

std::string annulus_csv(const AnnulusGrid& grid, const std::vector<double>& u);

std::string dump(const Json& j);

}  // namespace warpharm::io
