#include "pricetag/font.hpp"

#include <stdexcept>

namespace pricetag {

namespace {

// bit 4 = leftmost column
constexpr uint8_t kGlyphs[11][7] = {
    // 0
    {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},
    // 1
    {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},
    // 2
    {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},
    // 3
    {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},
    // 4
    {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},
    // 5
    {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},
    // 6
    {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},
    // 7
    {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},
    // 8
    {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},
    // 9
    {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},
    // .
    {0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b01100, 0b01100},
};

int glyph_index(char symbol) {
    if (symbol >= '0' && symbol <= '9') return symbol - '0';
    if (symbol == '.') return 10;
    throw std::invalid_argument(std::string("no glyph for symbol: ") + symbol);
}

bool font_bit(int idx, int col, int row) {
    return (kGlyphs[idx][row] >> (kFontCols - 1 - col)) & 1;
}

// Tight ink bounds within the 5x7 grid.
void tight_cells(int idx, int& c0, int& r0, int& c1, int& r1) {
    c0 = kFontCols;
    r0 = kFontRows;
    c1 = -1;
    r1 = -1;
    for (int r = 0; r < kFontRows; ++r)
        for (int c = 0; c < kFontCols; ++c)
            if (font_bit(idx, c, r)) {
                c0 = std::min(c0, c);
                r0 = std::min(r0, r);
                c1 = std::max(c1, c);
                r1 = std::max(r1, r);
            }
}

int block_lo(int i, int total, int span) { return i * span / total; }
int block_hi(int i, int total, int span) { return (i + 1) * span / total; }

}  // namespace

const uint8_t* font_glyph(char symbol) { return kGlyphs[glyph_index(symbol)]; }

void draw_glyph(ColorImage& canvas, char symbol, int x, int y, int cell_w, int cell_h,
                uint8_t r, uint8_t g, uint8_t b) {
    int idx = glyph_index(symbol);
    for (int row = 0; row < kFontRows; ++row) {
        int py0 = y + block_lo(row, kFontRows, cell_h);
        int py1 = y + block_hi(row, kFontRows, cell_h);
        for (int col = 0; col < kFontCols; ++col) {
            if (!font_bit(idx, col, row)) continue;
            int px0 = x + block_lo(col, kFontCols, cell_w);
            int px1 = x + block_hi(col, kFontCols, cell_w);
            for (int py = std::max(0, py0); py < std::min(canvas.height, py1); ++py)
                for (int px = std::max(0, px0); px < std::min(canvas.width, px1); ++px)
                    canvas.set(px, py, r, g, b);
        }
    }
}

Rect glyph_bounds(char symbol, int x, int y, int cell_w, int cell_h) {
    int idx = glyph_index(symbol);
    int c0, r0, c1, r1;
    tight_cells(idx, c0, r0, c1, r1);
    int px0 = x + block_lo(c0, kFontCols, cell_w);
    int px1 = x + block_hi(c1, kFontCols, cell_w);
    int py0 = y + block_lo(r0, kFontRows, cell_h);
    int py1 = y + block_hi(r1, kFontRows, cell_h);
    return Rect{px0, py0, px1 - px0, py1 - py0};
}

BinaryImage rasterize_glyph(char symbol, int w, int h) {
    int idx = glyph_index(symbol);
    int c0, r0, c1, r1;
    tight_cells(idx, c0, r0, c1, r1);
    int cols = c1 - c0 + 1, rows = r1 - r0 + 1;
    BinaryImage out(w, h);
    for (int y = 0; y < h; ++y) {
        int row = r0 + y * rows / h;
        for (int x = 0; x < w; ++x) {
            int col = c0 + x * cols / w;
            out.set(x, y, font_bit(idx, col, row));
        }
    }
    return out;
}

}  // namespace pricetag
