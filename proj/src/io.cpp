#include "domelab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace domelab::io {

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("number formatting failed");
    return std::string(buf, p);
}

std::string curve_to_csv(const PolyCurve& curve) {
    std::ostringstream os;
    os << "x,y\n";
    for (std::size_t i = 0; i < curve.vertex_count(); i++) {
        const Vec2& p = curve.vertex(i);
        os << fmt(p.x) << ',' << fmt(p.y) << '\n';
    }
    return os.str();
}

PolyCurve curve_from_csv(const std::string& text, bool closed, bool check_simple) {
    std::vector<Vec2> verts;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "x,y") continue;  // header optional
        }
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw Error("curve CSV line " + std::to_string(lineno) + ": expected x,y");
        double x, y;
        auto r1 = std::from_chars(line.data(), line.data() + comma, x);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), y);
        if (r1.ec != std::errc() || r2.ec != std::errc())
            throw Error("curve CSV line " + std::to_string(lineno) + ": bad number");
        verts.push_back({x, y});
    }
    return PolyCurve::make(std::move(verts), closed, check_simple);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f.write(content.data(), (std::streamsize)content.size());
    if (!f) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string mesh_to_obj(const std::vector<Vec3>& vertices,
                        const std::vector<std::array<std::uint32_t, 3>>& triangles) {
    std::ostringstream os;
    for (const Vec3& v : vertices)
        os << "v " << fmt(v.x) << ' ' << fmt(v.y) << ' ' << fmt(v.z) << '\n';
    for (const auto& t : triangles)
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    return os.str();
}

}  // namespace domelab::io
