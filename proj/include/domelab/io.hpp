#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "domelab/curve.hpp"

namespace domelab::io {

// Shortest round-trip decimal form of a double ('.' decimal separator).
std::string fmt(double v);

// Curve CSV: header "x,y", one vertex per line, LF line endings.  The
// closed/open flag travels out of band (CLI flag or caller argument).
std::string curve_to_csv(const PolyCurve& curve);
PolyCurve curve_from_csv(const std::string& text, bool closed, bool check_simple = true);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Wavefront OBJ for triangle meshes ("v x y z" / "f i j k", 1-based).
std::string mesh_to_obj(const std::vector<Vec3>& vertices,
                        const std::vector<std::array<std::uint32_t, 3>>& triangles);

}  // namespace domelab::io
