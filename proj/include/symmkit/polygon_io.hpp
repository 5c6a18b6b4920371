#pragma once

// Polygon literal files: one "x y" vertex per line, counterclockwise,
// '#' starts a comment. Written with 17 significant digits so a
// write/read round trip is exact.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "symmkit/polygon.hpp"

namespace symmkit {

inline std::string format_real(double x) {
    char buf[40];
    if (x == 0.0) x = 0.0;  // no "-0" in files
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline ConvexPolygon parse_polygon(std::istream& in, const std::string& name = "<stream>") {
    std::vector<Vec2> v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x = 0, y = 0;
        if (!(ls >> x)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected \"x y\"");
        }
        std::string rest;
        if (!(ls >> y) || (ls >> rest))
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected exactly two numbers");
        v.push_back({x, y});
    }
    if (v.empty()) throw ParseError(name + ": no vertices");
    try {
        if (v.size() == 1) return ConvexPolygon::point(v[0]);
        if (v.size() == 2) return ConvexPolygon::segment(v[0], v[1]);
        return ConvexPolygon::from_ccw(std::move(v));
    } catch (const InputError& e) {
        throw ParseError(name + ": " + e.what());
    }
}

inline ConvexPolygon read_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_polygon(in, path);
}

inline void write_polygon(std::ostream& out, const ConvexPolygon& p) {
    for (const auto& v : p.vertices()) out << format_real(v.x) << ' ' << format_real(v.y) << '\n';
}

inline void write_polygon(const std::string& path, const ConvexPolygon& p) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    write_polygon(out, p);
}

}  // namespace symmkit
