#pragma once

#include "geomk/core.hpp"

#include <iosfwd>
#include <string>

namespace geomk {

// Text formats: one record per line, values separated by whitespace or
// commas, "#" starts a comment. Points carry d values, halfspaces d+1
// ("a_1 ... a_d b" meaning a.x <= b, normals need not be unit).

PointSet read_points(const std::string& path);
PointSet read_points_stream(std::istream& in, const std::string& name);
void write_points(const std::string& path, const PointSet& s);

// Boundedness is certified on load unless check_bounded is false.
HPolytope read_halfspaces(const std::string& path, bool check_bounded = true);
HPolytope read_halfspaces_stream(std::istream& in, const std::string& name,
                                 bool check_bounded = true);
void write_halfspaces(const std::string& path, const HPolytope& p);

}  // namespace geomk
