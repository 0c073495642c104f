#include "mdli/png.hpp"

#include <cstdio>
#include <cstring>
#include <vector>

#include <zlib.h>

namespace mdli {

namespace {

uint32_t crc_table_entry(uint32_t n) {
    uint32_t c = n;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
    return c;
}

uint32_t crc32_of(const uint8_t* data, size_t len, uint32_t crc = 0xffffffffu) {
    static uint32_t table[256];
    static bool init = false;
    if (!init) {
        for (uint32_t n = 0; n < 256; ++n) table[n] = crc_table_entry(n);
        init = true;
    }
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
    return crc;
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

void chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& data) {
    put_u32(out, uint32_t(data.size()));
    size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uint32_t crc = crc32_of(out.data() + start, out.size() - start) ^ 0xffffffffu;
    put_u32(out, crc);
}

} // namespace

Result<bool> write_png(const std::string& path, const Grid& g, int scale) {
    if (!g.valid() || scale < 1) return Result<bool>::fail("bad grid or scale");
    int W = g.w * scale, H = g.h * scale;
    std::vector<uint8_t> raw;
    raw.reserve(size_t(H) * (size_t(W) * 3 + 1));
    for (int y = 0; y < H; ++y) {
        raw.push_back(0);  // filter: none
        for (int x = 0; x < W; ++x) {
            auto rgb = color_rgb(Color{g.at(y / scale, x / scale)});
            raw.push_back(rgb[0]);
            raw.push_back(rgb[1]);
            raw.push_back(rgb[2]);
        }
    }
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
        return Result<bool>::fail("deflate failed");
    compressed.resize(bound);

    std::vector<uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<uint8_t> ihdr;
    put_u32(ihdr, uint32_t(W));
    put_u32(ihdr, uint32_t(H));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // RGB
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    chunk(png, "IHDR", ihdr);
    chunk(png, "IDAT", compressed);
    chunk(png, "IEND", {});

    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return Result<bool>::fail("cannot open " + path);
    size_t written = std::fwrite(png.data(), 1, png.size(), f);
    std::fclose(f);
    if (written != png.size()) return Result<bool>::fail("short write to " + path);
    return Result<bool>::ok(true);
}

} // namespace mdli
