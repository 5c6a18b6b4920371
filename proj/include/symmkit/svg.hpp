#pragma once

// Minimal SVG output for body snapshots and trace charts. Numbers are
// printed with a fixed number of decimals so identical input gives
// identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "symmkit/process.hpp"

namespace symmkit {

namespace svg {

inline std::string fx(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3f", v);
    std::string s = b;
    if (s == "-0.000") s = "0.000";
    return s;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

class Document {
public:
    Document(double width, double height) : w_(width), h_(height) {}

    void polygon(const std::vector<Vec2>& pts, const std::string& style) { poly("polygon", pts, style); }
    void polyline(const std::vector<Vec2>& pts, const std::string& style) { poly("polyline", pts, style); }
    void rect(double x, double y, double w, double h, const std::string& style) {
        body_ << "<rect x=\"" << fx(x) << "\" y=\"" << fx(y) << "\" width=\"" << fx(w) << "\" height=\"" << fx(h) << "\" "
              << style << "/>\n";
    }
    void circle(Vec2 c, double r, const std::string& style) {
        body_ << "<circle cx=\"" << fx(c.x) << "\" cy=\"" << fx(c.y) << "\" r=\"" << fx(r) << "\" " << style << "/>\n";
    }
    void line(Vec2 a, Vec2 b, const std::string& style) {
        body_ << "<line x1=\"" << fx(a.x) << "\" y1=\"" << fx(a.y) << "\" x2=\"" << fx(b.x) << "\" y2=\"" << fx(b.y) << "\" "
              << style << "/>\n";
    }
    void text(Vec2 at, const std::string& s, const std::string& style = "font-size=\"11\" font-family=\"monospace\"") {
        body_ << "<text x=\"" << fx(at.x) << "\" y=\"" << fx(at.y) << "\" " << style << ">" << escape(s) << "</text>\n";
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fx(w_) << "\" height=\"" << fx(h_) << "\" viewBox=\"0 0 "
          << fx(w_) << ' ' << fx(h_) << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
          << body_.str() << "</svg>\n";
        return o.str();
    }

private:
    void poly(const char* tag, const std::vector<Vec2>& pts, const std::string& style) {
        body_ << '<' << tag << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << fx(pts[i].x) << ',' << fx(pts[i].y);
        body_ << "\" " << style << "/>\n";
    }

    double w_, h_;
    std::ostringstream body_;
};

/// Maps a square region of the plane, centred at the origin, onto pixels
/// (y up).
struct Frame {
    double half = 1.0, size = 400.0, margin = 10.0;
    [[nodiscard]] Vec2 map(Vec2 p) const {
        const double s = (size - 2 * margin) / (2 * half);
        return {margin + (p.x + half) * s, margin + (half - p.y) * s};
    }
    [[nodiscard]] double scale() const { return (size - 2 * margin) / (2 * half); }
};

inline double body_extent(const Body& b) {
    double r = 0.0;
    auto grow = [&](Vec2 p) { r = std::max({r, std::abs(p.x), std::abs(p.y)}); };
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConvexPolygon>) {
                for (auto v : x.vertices()) grow(v);
            } else if constexpr (std::is_same_v<T, SupportGrid>) {
                const auto p = grid_polygon(x);
                for (auto v : p.vertices()) grow(v);
            } else if constexpr (std::is_same_v<T, RasterSet>) {
                const auto& bx = x.box();
                const double h = x.cell_size();
                if (!x.empty()) {
                    grow({bx.x0 * h, bx.y0 * h});
                    grow({bx.x1 * h, bx.y1 * h});
                }
            } else {
                for (auto v : x.points) grow(v);
            }
        },
        b);
    return r;
}

}  // namespace svg

/// Drawing of a body on a square canvas with the axes through the origin.
/// `half` <= 0 picks a frame that fits the body.
inline std::string body_svg(const Body& b, const std::string& title = "", double half = 0.0, double size = 400.0) {
    svg::Frame f;
    f.size = size;
    f.half = half > 0 ? half : std::max(1e-9, 1.1 * svg::body_extent(b));
    svg::Document doc(size, size);
    doc.line(f.map({-f.half, 0}), f.map({f.half, 0}), "stroke=\"#bbbbbb\" stroke-width=\"0.5\"");
    doc.line(f.map({0, -f.half}), f.map({0, f.half}), "stroke=\"#bbbbbb\" stroke-width=\"0.5\"");
    const std::string fill = "fill=\"#4a7ab5\" fill-opacity=\"0.35\" stroke=\"#1f3f6b\" stroke-width=\"1\"";
    auto outline = [&](const ConvexPolygon& p) {
        std::vector<Vec2> pts;
        for (auto v : p.vertices()) pts.push_back(f.map(v));
        if (pts.size() >= 3)
            doc.polygon(pts, fill);
        else
            doc.polyline(pts, "fill=\"none\" stroke=\"#1f3f6b\" stroke-width=\"1.5\"");
    };
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConvexPolygon>) {
                outline(x);
            } else if constexpr (std::is_same_v<T, SupportGrid>) {
                outline(grid_polygon(x));
            } else if constexpr (std::is_same_v<T, RasterSet>) {
                // One rectangle per horizontal run of occupied cells.
                const auto& bx = x.box();
                const double h = x.cell_size();
                for (int j = bx.y0; j < bx.y1; ++j)
                    for (int i = bx.x0; i < bx.x1;) {
                        if (!x.get(i, j)) {
                            ++i;
                            continue;
                        }
                        int k = i;
                        while (k < bx.x1 && x.get(k, j)) ++k;
                        const Vec2 tl = f.map({i * h, (j + 1) * h});
                        doc.rect(tl.x, tl.y, (k - i) * h * f.scale(), h * f.scale(), "fill=\"#1f3f6b\"");
                        i = k;
                    }
            } else {
                outline(cloud_hull(x));
                for (auto p : x.points) doc.circle(f.map(p), 1.2, "fill=\"#b5404a\"");
            }
        },
        b);
    if (!title.empty()) doc.text({8, 16}, title);
    return doc.str();
}

/// Stacked line charts of the given trace columns against `step`.
/// Non-finite values break the line.
inline std::string trace_chart_svg(const TraceTable& t, const std::vector<std::string>& columns = {"dh_prev", "area", "mean_width"},
                                   const std::string& title = "") {
    for (const auto& c : columns)
        if (!t.count(c)) throw ParseError("trace_chart_svg: missing column '" + c + "'");
    if (!t.count("step")) throw ParseError("trace_chart_svg: missing column 'step'");
    const auto& step = t.at("step");
    const double width = 640, panel = 180, left = 80, right = 20, top = 30, gap = 30;
    const double height = top + static_cast<double>(columns.size()) * (panel + gap);
    svg::Document doc(width, height);
    if (!title.empty()) doc.text({left, 18}, title);
    double s0 = 0, s1 = 1;
    if (!step.empty()) {
        s0 = *std::min_element(step.begin(), step.end());
        s1 = *std::max_element(step.begin(), step.end());
    }
    if (s1 <= s0) s1 = s0 + 1;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& y = t.at(columns[c]);
        const double py = top + static_cast<double>(c) * (panel + gap);
        double y0 = INFINITY, y1 = -INFINITY;
        for (double v : y)
            if (std::isfinite(v)) {
                y0 = std::min(y0, v);
                y1 = std::max(y1, v);
            }
        if (!std::isfinite(y0)) y0 = 0, y1 = 1;
        if (y1 <= y0) {  // flat: centre the line
            const double pad = std::max(std::abs(y0) * 0.5, 1e-12);
            y0 -= pad;
            y1 += pad;
        }
        const double pw = width - left - right;
        auto map = [&](double s, double v) { return Vec2{left + (s - s0) / (s1 - s0) * pw, py + panel - (v - y0) / (y1 - y0) * panel}; };
        doc.rect(left, py, pw, panel, "fill=\"none\" stroke=\"#888888\" stroke-width=\"0.5\"");
        doc.text({8, py + 12}, columns[c]);
        doc.text({8, py + 28}, format_real(y1).substr(0, 12), "font-size=\"9\" font-family=\"monospace\"");
        doc.text({8, py + panel}, format_real(y0).substr(0, 12), "font-size=\"9\" font-family=\"monospace\"");
        std::vector<Vec2> run;
        for (std::size_t i = 0; i < y.size() && i < step.size(); ++i) {
            if (!std::isfinite(y[i])) {
                if (run.size() > 1) doc.polyline(run, "fill=\"none\" stroke=\"#1f3f6b\" stroke-width=\"1\"");
                run.clear();
                continue;
            }
            run.push_back(map(step[i], y[i]));
        }
        if (run.size() > 1) doc.polyline(run, "fill=\"none\" stroke=\"#1f3f6b\" stroke-width=\"1\"");
        if (run.size() == 1) doc.circle(run[0], 1.5, "fill=\"#1f3f6b\"");
    }
    doc.text({left, height - 8}, "step " + format_real(s0) + " .. " + format_real(s1), "font-size=\"9\" font-family=\"monospace\"");
    return doc.str();
}

}  // namespace symmkit
