#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mdli/util.hpp"

namespace mdli {

// One of the ten ARC colors, 0 = black.
struct Color {
    uint8_t v = 0;
    bool operator==(const Color&) const = default;
    auto operator<=>(const Color&) const = default;
};

inline constexpr int kNumColors = 10;

const std::string& color_name(Color c);
// Returns {0..9} for a known name, -1 otherwise.
int color_from_name(const std::string& name);
// Canonical ARC palette, RGB triples for colors 0..9.
std::array<uint8_t, 3> color_rgb(Color c);

// Row/column pair used for positions, sizes and moves. i = row, j = column.
struct Vec {
    int i = 0, j = 0;
    bool operator==(const Vec&) const = default;
    auto operator<=>(const Vec&) const = default;
    Vec operator+(Vec o) const { return {i + o.i, j + o.j}; }
    Vec operator-(Vec o) const { return {i - o.i, j - o.j}; }
};

struct Bitmap {
    int h = 0, w = 0;
    std::vector<uint8_t> bits;  // row-major, 0/1

    Bitmap() = default;
    Bitmap(int hh, int ww, uint8_t fill = 0) : h(hh), w(ww), bits(size_t(hh) * ww, fill) {}
    uint8_t at(int i, int j) const { return bits[size_t(i) * w + j]; }
    void set(int i, int j, uint8_t v) { bits[size_t(i) * w + j] = v; }
    int count() const {
        int c = 0;
        for (uint8_t b : bits) c += b != 0;
        return c;
    }
    bool operator==(const Bitmap&) const = default;
};

// Color matrix, the raw datum of the ARC domain. Valid sizes are 1..30.
struct Grid {
    int h = 0, w = 0;
    std::vector<uint8_t> cells;  // row-major color values

    Grid() = default;
    Grid(int hh, int ww, uint8_t fill = 0) : h(hh), w(ww), cells(size_t(hh) * ww, fill) {}
    uint8_t at(int i, int j) const { return cells[size_t(i) * w + j]; }
    void set(int i, int j, uint8_t v) { cells[size_t(i) * w + j] = v; }
    bool in_bounds(int i, int j) const { return i >= 0 && i < h && j >= 0 && j < w; }
    bool valid() const { return h >= 1 && w >= 1 && h <= 30 && w <= 30 && cells.size() == size_t(h) * w; }
    bool operator==(const Grid&) const = default;
};

// One row of a string task: a fixed-arity tuple of cell strings.
struct Row {
    std::vector<std::string> cells;
    bool operator==(const Row&) const = default;
};

// Primitive payloads a ConstVal node can carry, across both domains.
using Value = std::variant<int, Color, Bitmap, Grid, std::string, bool>;

uint64_t value_hash(const Value& v);
std::string value_to_string(const Value& v);

inline bool value_eq(const Value& a, const Value& b) { return a == b; }

} // namespace mdli
