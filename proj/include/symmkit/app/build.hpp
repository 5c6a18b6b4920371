#pragma once

// Config keys -> bodies, sequences and process specs; body files by
// extension (.pbm raster, .grid support grid, .cloud points, else polygon).

#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "symmkit/app/params.hpp"
#include "symmkit/process.hpp"
#include "symmkit/random.hpp"

namespace symmkit::app {

inline Defaults body_keys() {
    return {{"body", "random"},     {"body_file", ""},   {"body_seed", "1"}, {"points", "12"},
            {"radius", "1"},        {"a", "2"},          {"b", "0.5"},       {"vertices", "512"},
            {"width", "1"},         {"height", "0.02"},  {"length", "1"},    {"disk_radius", "0.08"}};
}

inline Defaults sequence_keys() {
    return {{"sequence", "harmonic"}, {"c", "1"}, {"p", "1"}, {"q", "0.9"}, {"endpoint", "0.4854027596813666"},
            {"angles", ""},           {"orientation", "normal"}, {"seed", "1"}};
}

inline Defaults representation_keys() {
    return {{"representation", "polygon"}, {"grid_n", "4096"}, {"cell_size", "0.001953125"}, {"half_extent", "768"},
            {"snap", "1e-4"}};
}

inline Defaults run_keys() {
    return {{"operator", "steiner"}, {"steps", "100"},  {"start_index", "1"},         {"rotation_correction", "false"},
            {"window", "50"},        {"tol", "1e-6"},   {"require_verdict", "false"}};
}

/// Union of the key groups with `over` taking precedence (and adding keys).
inline Defaults merge_defaults(const std::vector<Defaults>& groups, const Defaults& over) {
    Defaults out;
    auto put = [&](const std::string& k, const std::string& v) {
        for (auto& kv : out)
            if (kv.first == k) {
                kv.second = v;
                return;
            }
        out.emplace_back(k, v);
    };
    for (const auto& g : groups)
        for (const auto& [k, v] : g) put(k, v);
    for (const auto& [k, v] : over) put(k, v);
    return out;
}

// --- body files ----------------------------------------------------------------------------

inline std::string extension(const std::string& path) { return std::filesystem::path(path).extension().string(); }

inline PointCloud read_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    PointCloud c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        double x = 0, y = 0;
        std::string rest;
        if (!(ls >> x >> y) || (ls >> rest) || !std::isfinite(x) || !std::isfinite(y))
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"x y\"");
        c.points.push_back({x, y});
    }
    if (c.points.empty()) throw ParseError(path + ": no points");
    return c;
}

inline void write_cloud(const std::string& path, const PointCloud& c) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (auto p : c.points) out << format_real(p.x) << ' ' << format_real(p.y) << '\n';
}

inline Body read_body(const std::string& path) {
    const auto ext = extension(path);
    if (ext == ".pbm") return read_pbm(path);
    if (ext == ".grid") return read_grid(path);
    if (ext == ".cloud") return read_cloud(path);
    return read_polygon(path);
}

inline std::string body_extension(const Body& b) {
    switch (representation_of(b)) {
        case Representation::polygon: return ".poly";
        case Representation::grid: return ".grid";
        case Representation::raster: return ".pbm";
        case Representation::cloud: return ".cloud";
    }
    return ".poly";
}

inline void write_body(const std::string& path, const Body& b) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConvexPolygon>) write_polygon(path, x);
            else if constexpr (std::is_same_v<T, SupportGrid>) write_grid(path, x);
            else if constexpr (std::is_same_v<T, RasterSet>) write_pbm(path, x);
            else write_cloud(path, x);
        },
        b);
}

// --- builders ------------------------------------------------------------------------------

inline ConvexPolygon segment_disk_polygon(double length, double r) {
    std::vector<Vec2> pts{{0, -length / 2}, {0, length / 2}};
    if (r > 0) {
        const auto disk = regular_polygon(64, r);
        pts.insert(pts.end(), disk.vertices().begin(), disk.vertices().end());
    }
    return ConvexPolygon::hull(pts);
}

inline Representation parse_representation(const std::string& s) {
    if (s == "polygon") return Representation::polygon;
    if (s == "grid") return Representation::grid;
    if (s == "raster") return Representation::raster;
    return Representation::cloud;
}

/// Reads every body key (so problems are reported together) and returns a
/// builder to call after check().
struct BodyRequest {
    std::string shape, file;
    std::uint64_t seed = 1;
    int points = 12, vertices = 512, grid_n = 4096, half_extent = 768;
    double radius = 1, a = 2, b = 0.5, width = 1, height = 0.02, length = 1, disk_radius = 0.08, cell_size = 1.0 / 512, snap = 1e-4;
    Representation rep = Representation::polygon;

    static BodyRequest read(Params& p) {
        BodyRequest r;
        r.shape = p.choice("body", {"random", "diamond", "square", "rectangle", "rhombus", "regular", "ellipse", "segment-disk",
                                    "quad", "file"});
        r.file = p.text("body_file");
        r.seed = p.seed("body_seed");
        r.points = p.integer("points", 3, 100000);
        r.radius = p.real("radius", 1e-9, 1e9);
        r.a = p.real("a", 1e-9, 1e9);
        r.b = p.real("b", 1e-9, 1e9);
        r.vertices = p.integer("vertices", 3, 1000000);
        r.width = p.real("width", 0, 1e9);
        r.height = p.real("height", 0, 1e9);
        r.length = p.real("length", 0, 1e9);
        r.disk_radius = p.real("disk_radius", 0, 1e9);
        r.rep = parse_representation(p.choice("representation", {"polygon", "grid", "raster", "cloud"}));
        r.grid_n = p.integer("grid_n", 3, 1 << 24);
        r.cell_size = p.real("cell_size", 1e-9, 1e3);
        r.half_extent = p.integer("half_extent", 1, 1 << 15);
        r.snap = p.real("snap", 1e-12, 1e3);
        if (r.shape == "file" && r.file.empty()) p.problem("body=file needs body_file");
        if (r.shape != "file" && !r.file.empty()) p.problem("body_file is set but body is '" + r.shape + "' (use body=file)");
        if (r.shape == "file" && !r.file.empty() && !std::filesystem::exists(r.file))
            p.problem("body_file: " + r.file + " does not exist");
        return r;
    }

    [[nodiscard]] ConvexPolygon polygon() const {
        if (shape == "random") {
            Rng rng(seed);
            return random_polygon(rng, points, radius);
        }
        if (shape == "diamond") return ConvexPolygon::from_ccw({{radius, 0}, {0, radius}, {-radius, 0}, {0, -radius}});
        if (shape == "square") return rectangle(-radius, -radius, radius, radius);
        if (shape == "rectangle") return rectangle(-width / 2, -height / 2, width / 2, height / 2);
        if (shape == "rhombus") return ConvexPolygon::from_ccw({{-width / 2, 0}, {0, -height / 2}, {width / 2, 0}, {0, height / 2}});
        if (shape == "regular") return regular_polygon(vertices, radius);
        if (shape == "ellipse") return ellipse_polygon(a, b, vertices);
        if (shape == "segment-disk") return segment_disk_polygon(length, disk_radius);
        if (shape == "quad") return ConvexPolygon::from_ccw({{0.6, 0.1}, {-0.2, 0.5}, {-0.4, -0.3}, {0.1, -0.45}});
        throw InputError("body '" + shape + "' is not a polygon");
    }

    [[nodiscard]] Body build() const {
        if (shape == "file") {
            Body b = read_body(file);
            const auto have = representation_of(b);
            if (have == rep) return b;
            if (have != Representation::polygon)
                throw InputError(file + ": a " + std::string(to_string(have)) + " file cannot be used as " + to_string(rep));
            return convert(std::get<ConvexPolygon>(b));
        }
        if (shape == "segment-disk" && rep == Representation::raster)
            return segment_with_disk(length, disk_radius, cell_size, half_extent);
        return convert(polygon());
    }

    [[nodiscard]] Body convert(const ConvexPolygon& p) const {
        switch (rep) {
            case Representation::polygon: return p;
            case Representation::grid: return sample_from_polygon(p, DirectionSet::circle(grid_n));
            case Representation::raster: return rasterize_polygon(p, cell_size, half_extent);
            case Representation::cloud: return PointCloud{p.vertices()};
        }
        return p;
    }
};

struct SequenceRequest {
    AngleSequence angles;
    LineOrientation orientation = LineOrientation::normal;
    bool ok = false;

    static SequenceRequest read(Params& p) {
        SequenceRequest r;
        const auto kind = p.choice("sequence", {"harmonic", "power", "geometric", "periodic", "oscillating", "explicit", "random"});
        const double c = p.real("c", 0, 1e9), pw = p.real("p", 0, 1e9), q = p.real("q", 0, 1), end = p.real("endpoint");
        const auto list = p.reals("angles");
        const auto seed = p.seed("seed");
        r.orientation = p.choice("orientation", {"normal", "span"}) == "span" ? LineOrientation::span : LineOrientation::normal;
        try {
            if (kind == "harmonic") r.angles = AngleSequence::harmonic(c);
            else if (kind == "power") r.angles = AngleSequence::power(c, pw);
            else if (kind == "geometric") r.angles = AngleSequence::geometric(c, q);
            else if (kind == "periodic") r.angles = AngleSequence::periodic(list);
            else if (kind == "oscillating") r.angles = AngleSequence::oscillating(end, c);
            else if (kind == "explicit") r.angles = AngleSequence::explicit_list(list);
            else r.angles = AngleSequence::random_lines(seed);
            r.ok = true;
        } catch (const InputError& e) {
            p.problem(std::string("sequence: ") + e.what());
        }
        return r;
    }

    [[nodiscard]] DirectionSequence generate(int m) const { return generate_sequence(angles, m, orientation); }
};

struct RunRequest {
    OperatorKind op = OperatorKind::steiner;
    int steps = 100, start_index = 1, window = 50;
    bool rotation_correction = false, require_verdict = false;
    double tol = 1e-6;

    static RunRequest read(Params& p) {
        RunRequest r;
        r.op = parse_operator(p.choice("operator", {"steiner", "minkowski", "fiber"}));
        r.steps = p.integer("steps", 1, 100'000'000);
        r.start_index = p.integer("start_index", 1, 100'000'000);
        r.rotation_correction = p.flag("rotation_correction");
        r.window = p.integer("window", 0, 1'000'000);
        r.tol = p.real("tol", 0, 1e9);
        r.require_verdict = p.flag("require_verdict");
        return r;
    }

    [[nodiscard]] int last_index() const { return start_index + steps - 1; }

    [[nodiscard]] ProcessSpec spec(DirectionSequence d, const BodyRequest& b) const {
        ProcessSpec s;
        s.op = op;
        s.sequence = std::move(d);
        s.start_index = start_index;
        s.max_steps = steps;
        s.rotation_correction = rotation_correction;
        s.window = window;
        s.cloud_snap = b.snap;
        return s;
    }
};

}  // namespace symmkit::app
