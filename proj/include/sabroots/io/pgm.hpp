#pragma once

// Binary PGM (P5), 8-bit. Brightness is the min-max normalized value, so
// brighter means a larger score. Rows follow alpha ascending top to bottom.

#include <algorithm>
#include <cmath>
#include <string>

#include "sabroots/tuner.hpp"

namespace sabroots::io {

struct Bounds {
    double min = 0.0;
    double max = 0.0;
};

inline Bounds finite_bounds(const Grid2D& g) {
    Bounds b{0.0, 0.0};
    bool any = false;
    for (double v : g.data) {
        if (!std::isfinite(v)) continue;
        if (!any) {
            b = {v, v};
            any = true;
        }
        b.min = std::min(b.min, v);
        b.max = std::max(b.max, v);
    }
    return b;
}

/// Constant matrices map to 0; non-finite entries also map to 0.
inline unsigned char to_gray(double v, Bounds b) {
    if (!std::isfinite(v) || !(b.max > b.min)) return 0;
    const double t = std::clamp((v - b.min) / (b.max - b.min), 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(255.0 * t));
}

inline std::string to_pgm(const Grid2D& g, Bounds b) {
    std::string out = "P5\n" + std::to_string(g.cols) + " " + std::to_string(g.rows) + "\n255\n";
    out.reserve(out.size() + g.data.size());
    for (double v : g.data) out.push_back(static_cast<char>(to_gray(v, b)));
    return out;
}

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::string pixels;
};

/// Reads back what to_pgm writes (single-space separated header, maxval 255).
inline GrayImage parse_pgm(const std::string& data) {
    GrayImage img;
    std::size_t pos = 0;
    const auto token = [&]() {
        while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        const auto start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        return data.substr(start, pos - start);
    };
    if (token() != "P5") throw std::invalid_argument("not a P5 image");
    img.width = std::stoul(token());
    img.height = std::stoul(token());
    if (token() != "255") throw std::invalid_argument("unsupported maxval");
    ++pos;  // single whitespace byte before the raster
    if (data.size() - pos != img.width * img.height) throw std::invalid_argument("raster size mismatch");
    img.pixels = data.substr(pos);
    return img;
}

}  // namespace sabroots::io
